#include "ecoop/rates.hpp"

#include <stdexcept>

namespace ecoop {

bool majorizes(std::vector<double> a, std::vector<double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("majorization needs equal lengths");
  }
  double ta = 0, tb = 0;
  for (double x : a) ta += x;
  for (double x : b) tb += x;
  if (std::abs(ta - tb) > 1e-9) {
    throw std::invalid_argument("majorization needs equal totals");
  }
  std::sort(a.begin(), a.end(), std::greater<>());
  std::sort(b.begin(), b.end(), std::greater<>());
  double pa = 0, pb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    pa += a[i];
    pb += b[i];
    if (pa > pb + 1e-9) return false;
  }
  return true;
}

}  // namespace ecoop
