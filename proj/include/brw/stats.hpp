#pragma once

#include <utility>
#include <vector>

namespace brw {

/// Wilson score interval for k successes in n trials (default 95%).
std::pair<double, double> wilson_interval(long long k, long long n, double z = 1.959963984540054);

/// Two-sample Kolmogorov-Smirnov statistic; inputs need not be sorted.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Asymptotic KS critical value at level alpha for sample sizes n, m.
double ks_critical(double alpha, std::size_t n, std::size_t m);

} // namespace brw
