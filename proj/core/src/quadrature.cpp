#include "wpvol/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

namespace wpvol {

namespace {
// |K - G| stalls near this multiple of the L1 norm from rounding alone.
constexpr double kRoundingFloor = 100 * std::numeric_limits<double>::epsilon();
}  // namespace

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

QuadResult integrate(const std::function<double(double)>& f, double a, double b, double abs_tol, int initial_pieces) {
  if (!(b > a)) return {};
  initial_pieces = std::max(1, initial_pieces);
  if (std::isinf(b)) {
    // x = a + t / (1 - t)
    const auto g = [&](double t) {
      const double s = 1.0 - t;
      return s > 0.0 ? f(a + t / s) / (s * s) : 0.0;
    };
    return integrate(g, 0.0, 1.0, abs_tol, initial_pieces);
  }
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  struct Piece {
    double a, b, value, error, l1;
    bool operator<(const Piece& o) const { return error < o.error; }
  };
  const auto rule = [&](double lo, double hi) {
    Piece p{lo, hi, 0.0, 0.0, 0.0};
    p.value = GK::integrate(f, lo, hi, 0, 0.0, &p.error, &p.l1);
    // The single-rule error comes back in [-1, 1] units; L1 is already scaled.
    p.error *= 0.5 * (hi - lo);
    return p;
  };
  // Global bisection of the worst interval until the summed error meets the
  // absolute target.
  std::priority_queue<Piece> heap;
  double total_err = 0.0;
  double total_l1 = 0.0;
  const double h = (b - a) / initial_pieces;
  for (int i = 0; i < initial_pieces; ++i) {
    const Piece p = rule(a + i * h, i + 1 == initial_pieces ? b : a + (i + 1) * h);
    total_err += p.error;
    total_l1 += p.l1;
    heap.push(p);
  }
  const int max_pieces = initial_pieces + 4000;
  int pieces = initial_pieces;
  while (total_err > abs_tol + kRoundingFloor * total_l1 && pieces < max_pieces) {
    const Piece worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;
    heap.pop();
    const Piece left = rule(worst.a, mid);
    const Piece right = rule(mid, worst.b);
    total_err += left.error + right.error - worst.error;
    total_l1 += left.l1 + right.l1 - worst.l1;
    heap.push(left);
    heap.push(right);
    ++pieces;
  }
  CompensatedSum value;
  CompensatedSum err;
  CompensatedSum l1;
  while (!heap.empty()) {
    value.add(heap.top().value);
    err.add(heap.top().error);
    l1.add(heap.top().l1);
    heap.pop();
  }
  const QuadResult out{value.value(), err.value()};
  if (!std::isfinite(out.value)) throw ToleranceError("quadrature produced a non-finite value");
  if (out.error > abs_tol + kRoundingFloor * l1.value()) {
    std::ostringstream os;
    os << "quadrature error " << out.error << " exceeds tolerance " << abs_tol;
    throw ToleranceError(os.str());
  }
  return out;
}

}  // namespace wpvol
