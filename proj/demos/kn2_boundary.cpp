// Traces the boundary of K_n^2 in the (a_1) direction with a_0 = a_2 = 1:
// the sampled verdict for sqrt(f_a) flips where n a_1^2 = 2(n-1).

#include <cmath>
#include <cstdio>

#include "garding/garding.hpp"

int main() {
  using namespace garding;
  std::printf("%3s %10s %10s %10s %10s\n", "n", "threshold", "a_1", "p2", "sampled");
  for (int n = 3; n <= 8; ++n) {
    const double threshold = std::sqrt(2.0 * (n - 1) / n);
    for (double f : {0.9, 0.99, 1.0, 1.01, 1.1}) {
      const double a1 = f * threshold;
      const auto v = sample_concavity(Concavifier::power(0.5), CoeffVector({1.0, a1, 1.0}), n, 4000, 1);
      std::printf("%3d %10.6f %10.6f %10s %10s\n", n, threshold, a1, p2_criterion(1.0, a1, 1.0, n) ? "in" : "out",
                  to_string(v.status).c_str());
    }
  }
}
