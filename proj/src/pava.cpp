#include "wassreg/pava.hpp"

#include <vector>

namespace wassreg {

Eigen::VectorXd isotonic_fit(const Eigen::VectorXd& y) {
  const int n = static_cast<int>(y.size());
  // Active blocks: (mean, count), merged whenever a new value would decrease.
  std::vector<double> mean;
  std::vector<int> count;
  mean.reserve(n);
  count.reserve(n);
  for (int i = 0; i < n; ++i) {
    double m = y[i];
    int c = 1;
    while (!mean.empty() && mean.back() > m) {
      m = (m * c + mean.back() * count.back()) / (c + count.back());
      c += count.back();
      mean.pop_back();
      count.pop_back();
    }
    mean.push_back(m);
    count.push_back(c);
  }
  Eigen::VectorXd out(n);
  int pos = 0;
  for (std::size_t b = 0; b < mean.size(); ++b)
    for (int j = 0; j < count[b]; ++j) out[pos++] = mean[b];
  return out;
}

}  // namespace wassreg
