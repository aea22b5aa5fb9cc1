#include "roughlab/young.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "roughlab/area.hpp"
#include "roughlab/variation.hpp"

namespace roughlab {

// ---------------------------------------------------------------- ModulusFn

ModulusFn ModulusFn::power(double a) {
  if (!(a > 0.0)) throw ValidationError("power modulus needs a > 0");
  return ModulusFn(Kind::power, a, 0.0);
}

ModulusFn ModulusFn::log_power(double a, double c) {
  if (!(a > 0.0)) throw ValidationError("log-power modulus needs a > 0");
  if (!(c >= 2.0)) throw ValidationError("log-power modulus needs c >= 2");
  return ModulusFn(Kind::log_power, a, c);
}

ModulusFn ModulusFn::iterated_log(double a, double c) {
  if (!(a > 0.0)) throw ValidationError("iterated-log modulus needs a > 0");
  if (!(c > std::numbers::e))
    throw ValidationError("iterated-log modulus needs c > e");
  return ModulusFn(Kind::iterated_log, a, c);
}

ModulusFn ModulusFn::product(const ModulusFn& m1, const ModulusFn& m2) {
  ModulusFn m(Kind::product, 0.0, 0.0);
  m.lhs_ = std::make_shared<const ModulusFn>(m1);
  m.rhs_ = std::make_shared<const ModulusFn>(m2);
  return m;
}

ModulusFn ModulusFn::constant() { return ModulusFn(Kind::constant, 0.0, 0.0); }

double ModulusFn::operator()(double t) const {
  if (!(t > 0.0)) throw ValidationError("modulus evaluated at t <= 0");
  switch (kind_) {
    case Kind::power: return std::pow(t, a_);
    case Kind::log_power: return std::pow(std::log(c_ / t), -a_);
    case Kind::iterated_log: return std::pow(std::log(std::log(c_ / t)), -a_);
    case Kind::product: return (*lhs_)(t) * (*rhs_)(t);
    case Kind::constant: return 1.0;
  }
  return 0.0;
}

double ModulusFn::at_log(double u) const {
  switch (kind_) {
    case Kind::power: return std::exp(-a_ * u);
    case Kind::log_power: return std::pow(std::log(c_) + u, -a_);
    case Kind::iterated_log:
      return std::pow(std::log(std::log(c_) + u), -a_);
    case Kind::product: return lhs_->at_log(u) * rhs_->at_log(u);
    case Kind::constant: return 1.0;
  }
  return 0.0;
}

std::vector<ModulusFn> ModulusFn::factors() const {
  if (kind_ != Kind::product) return {*this};
  auto out = lhs_->factors();
  auto r = rhs_->factors();
  out.insert(out.end(), r.begin(), r.end());
  return out;
}

bool ModulusFn::admissible() const {
  bool vanishing = false;
  for (const auto& f : factors())
    if (f.kind() != Kind::constant) vanishing = true;
  return vanishing && (*this)(1.0) <= 1.0 + kAbsTol;
}

std::string ModulusFn::describe() const {
  switch (kind_) {
    case Kind::power: return "t^" + format_real(a_);
    case Kind::log_power:
      return "(ln(" + format_real(c_) + "/t))^-" + format_real(a_);
    case Kind::iterated_log:
      return "(ln ln(" + format_real(c_) + "/t))^-" + format_real(a_);
    case Kind::product: return lhs_->describe() + " * " + rhs_->describe();
    case Kind::constant: return "1";
  }
  return "";
}

// --------------------------------------------------------- modulus_integral

namespace {

struct Simpson {
  const std::function<double(double)>& f;
  double err = 0.0;

  double run(double a, double b, double fa, double fm, double fb, double whole,
             double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps) {
      err += std::abs(delta);
      return left + right + delta / 15.0;
    }
    return run(a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           run(m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
  }
};

}  // namespace

QuadResult modulus_integral(const ModulusFn& m1, const ModulusFn& m2,
                            double tol) {
  if (!(tol > 0.0)) throw ValidationError("quadrature tol must be > 0");
  std::vector<ModulusFn> fs = m1.factors();
  for (const auto& f : m2.factors()) fs.push_back(f);

  double P = 0.0, A = 0.0, B = 0.0;
  double Lmin_log = std::numeric_limits<double>::infinity();
  double Lmin_all = Lmin_log;
  for (const auto& f : fs) {
    switch (f.kind()) {
      case ModulusFn::Kind::power: P += f.a(); break;
      case ModulusFn::Kind::log_power:
        A += f.a();
        Lmin_log = std::min(Lmin_log, std::log(f.c()));
        Lmin_all = std::min(Lmin_all, std::log(f.c()));
        break;
      case ModulusFn::Kind::iterated_log:
        B += f.a();
        Lmin_all = std::min(Lmin_all, std::log(f.c()));
        break;
      default: break;
    }
  }
  constexpr double eps = 1e-12;
  const bool power_decay = P > 0.0;
  const bool log_decay = !power_decay && A > 1.0 + eps;
  const bool iter_decay = !power_decay && !log_decay &&
                          std::abs(A - 1.0) <= eps && B > 1.0 + eps;
  if (!power_decay && !log_decay && !iter_decay)
    throw DivergentError("modulus integral diverges: log-power exponent sum " +
                             format_real(A) + " <= 1",
                         A);

  // Everything below works with y = ln(1+u), u = ln(1/t), so that u itself
  // never has to be formed; iterated-log tails reach far beyond exp(709).
  // ln(L + u) - y for L = ln c.
  auto log_shift_rel = [](double L, double y) {
    if (y > 30.0) return std::log1p((L - 1.0) * std::exp(-y));
    return std::log(L + std::expm1(y)) - y;
  };
  auto log_shift = [&](double L, double y) { return y + log_shift_rel(L, y); };
  // ln of the product of the selected leaves at u = e^y - 1, times e^{ky}.
  // The y-linear parts are collected first so that they cancel exactly.
  auto log_product = [&](double y, bool power, bool log, bool iter,
                         double k = 0.0) {
    double coef = k, rest = 0.0;
    for (const auto& f : fs) {
      switch (f.kind()) {
        case ModulusFn::Kind::power:
          if (power) rest -= f.a() * std::expm1(y);
          break;
        case ModulusFn::Kind::log_power:
          if (log) {
            coef -= f.a();
            rest -= f.a() * log_shift_rel(std::log(f.c()), y);
          }
          break;
        case ModulusFn::Kind::iterated_log:
          if (iter) rest -= f.a() * std::log(log_shift(std::log(f.c()), y));
          break;
        default: break;
      }
    }
    if (std::abs(coef) <= eps) coef = 0.0;
    return coef * y + rest;
  };
  // Tail of the u-integral beyond u = e^Y - 1, bounded by a decreasing
  // envelope.
  auto tail = [&](double Y) {
    if (power_decay)
      return std::exp(log_product(Y, false, true, true) - P * std::expm1(Y)) / P;
    if (log_decay)
      return std::exp(log_product(Y, false, false, true) +
                      (1.0 - A) * log_shift(Lmin_log, Y)) /
             (A - 1.0);
    const double l = log_shift(Lmin_all, Y);
    if (!(l > 0.0)) return std::numeric_limits<double>::infinity();
    return std::pow(l, 1.0 - B) / (B - 1.0);
  };

  // x = ln(1+y) turns every admissible tail into an exponential one.
  const std::function<double(double)> g = [&](double x) {
    const double y = std::expm1(x);
    return std::exp(log_product(y, true, true, true, 1.0) + x);
  };
  double X = 1.0;
  double tb = tail(std::expm1(X));
  while (tb > 0.5 * tol && X < 512.0) {
    X *= 2.0;
    tb = tail(std::expm1(X));
  }
  const int panels = static_cast<int>(std::ceil(X)) * 8;
  Simpson s{g};
  double value = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double a = X * k / panels, b = X * (k + 1) / panels;
    const double fa = g(a), fm = g(0.5 * (a + b)), fb = g(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    value += s.run(a, b, fa, fm, fb, whole, 0.5 * tol / panels, 30);
  }
  return {value + 0.5 * tb, s.err + 0.5 * tb};
}

// ------------------------------------------------------------- rs_integrate

std::string to_string(Status s) {
  switch (s) {
    case Status::converged: return "converged";
    case Status::diverging: return "diverging";
    case Status::oscillating: return "oscillating";
    case Status::inconclusive: return "inconclusive";
  }
  return "";
}

Status classify_levels(const std::vector<Tensor2>& values,
                       const std::vector<double>& diffs, double tol) {
  const std::size_t L = values.size();
  if (L >= 3) {
    const double a = diffs[L - 2], b = diffs[L - 1];
    if (a < tol && b < tol && b <= a) return Status::converged;
  }
  double base = 0.0;
  for (const auto& v : values) {
    if (v.frobenius() > 0.0) {
      base = v.frobenius();
      break;
    }
  }
  int run = 0;
  for (std::size_t i = 0; i < L; ++i) {
    const double n = values[i].frobenius();
    if (base > 0.0 && n > kDivergenceFactor * base) return Status::diverging;
    if (i > 0 && n > values[i - 1].frobenius()) {
      if (++run >= kDivergenceRun) return Status::diverging;
    } else {
      run = 0;
    }
  }
  int alternations = 0;
  for (std::size_t i = 2; i < L; ++i) {
    const Tensor2 d0 = values[i - 1] - values[i - 2];
    const Tensor2 d1 = values[i] - values[i - 1];
    const double n0 = d0.frobenius(), n1 = d1.frobenius();
    if (n0 > 0.0 && dot(d0, d1) < 0.0 && n1 >= kOscillationRatio * n0)
      ++alternations;
  }
  if (alternations >= kOscillationCount) return Status::oscillating;
  return Status::inconclusive;
}

void check_schedule(const std::vector<Partition>& schedule,
                    std::size_t grid_size) {
  if (schedule.empty()) throw ValidationError("schedule is empty");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i].grid_size() != grid_size)
      throw ValidationError("schedule level " + std::to_string(i) +
                            " belongs to another grid");
    if (i > 0 && !schedule[i - 1].is_subset_of(schedule[i]))
      throw ValidationError("schedule not nested at level " +
                            std::to_string(i));
  }
  if (schedule.back().size() != grid_size)
    throw ValidationError("schedule must end at the full grid");
}

ConvergenceReport rs_integrate(const SampledPath& path1,
                               const SampledPath& path2,
                               const std::vector<Partition>& schedule,
                               double tol) {
  if (!(tol > 0.0)) throw ValidationError("tol must be > 0");
  if (path1.size() != path2.size())
    throw ValidationError("paths live on different grids");
  for (std::size_t i = 0; i < path1.size(); ++i)
    if (std::abs(path1.time(i) - path2.time(i)) > kAbsTol)
      throw ValidationError("paths live on different grids");
  if (path1.size() > max_samples())
    throw SizeLimitError("path exceeds the sample cap");
  check_schedule(schedule, path1.size());

  ConvergenceReport rep{Status::inconclusive, tol, {}, std::nullopt,
                        std::nullopt};
  std::vector<Tensor2> values;
  std::vector<double> diffs;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const SampledPath f1 = restrict(path1, schedule[i]);
    const SampledPath f2 = restrict(path2, schedule[i]);
    const IteratedTable fine(f1, f2);
    double diff = std::numeric_limits<double>::quiet_NaN();
    if (i > 0) {
      const IteratedTable coarse(
          interpolate_onto(restrict(path1, schedule[i - 1]), f1.times()),
          interpolate_onto(restrict(path2, schedule[i - 1]), f1.times()));
      diff = grid_pvar_dp_rows(f1.size(), 1.0, [&](std::size_t j, double* out) {
        fine.diff_norm_row(coarse, j, out);
      });
    }
    Tensor2 v = fine(0, f1.size() - 1);
    values.push_back(v);
    diffs.push_back(diff);
    rep.levels.push_back({schedule[i].mesh(path1), std::move(v), diff});
  }
  rep.status = classify_levels(values, diffs, tol);
  if (rep.status == Status::converged) {
    const IteratedTable table(path1, path2);
    const std::size_t n = path1.size(), d1 = path1.dim(), d2 = path2.dim();
    std::vector<double> flat(n * d1 * d2);
    for (std::size_t k = 0; k < n; ++k) {
      const Tensor2 I = table(0, k);
      for (std::size_t a = 0; a < d1; ++a)
        for (std::size_t b = 0; b < d2; ++b)
          flat[(k * d1 + a) * d2 + b] =
              I(a, b) +
              path1.value(0, a) * (path2.value(k, b) - path2.value(0, b));
    }
    SampledPath J(path1.times(), std::move(flat), d1 * d2);
    Tensor2 last(d1, d2);
    for (std::size_t a = 0; a < d1; ++a)
      for (std::size_t b = 0; b < d2; ++b) last(a, b) = J.value(n - 1, a * d2 + b);
    rep.final_value = std::move(last);
    rep.integral_path = std::move(J);
  }
  return rep;
}

// ---------------------------------------------------------------- constants

double young_constant(double p, double q) {
  if (!(p > 1.0) || !(q > 1.0))
    throw ValidationError("young constant needs p, q > 1");
  const double theta = 1.0 / p + 1.0 / q;
  if (!(theta > 1.0))
    throw ValidationError("young constant needs 1/p + 1/q > 1");
  return 2.0 / (1.0 - std::pow(2.0, 1.0 - theta));
}

std::pair<double, double> young_bound_extended(double C1, double C2,
                                               double I_m) {
  if (C1 < 0.0 || C2 < 0.0 || I_m < 0.0)
    throw ValidationError("extended Young bound needs non-negative inputs");
  return {8.0 * C1 * C2 * (2.0 + I_m), C1 * C2 * (15.0 + 8.0 * I_m)};
}

double constants_Cap(double a, double p) {
  if (!(a > 0.0) || !(p > 1.0))
    throw ValidationError("C_{a,p} needs a > 0 and p > 1");
  const double b = std::pow(2.0, 2.0 * (1.0 - 1.0 / p));
  double C1 = b / (b - 1.0) + 1.0;
  double den = std::pow(C1 - 1.0, 1.0 / a) * std::pow(b, 1.0 / a) -
               std::pow(C1, 1.0 / a);
  for (int k = 0; !(den > 0.0); ++k) {
    if (k > 200) throw ConsistencyError("C_{a,p}: no admissible C1");
    C1 *= 2.0;
    den = std::pow(C1 - 1.0, 1.0 / a) * std::pow(b, 1.0 / a) -
          std::pow(C1, 1.0 / a);
  }
  const double mmax_real = std::floor(std::pow(C1, 1.0 / a) / den) + 1.0;
  if (mmax_real > 1e9) throw SizeLimitError("C_{a,p}: search range too large");
  const auto mmax = static_cast<long>(mmax_real);
  // r_m = (m^a / b^m) sum_{k<=m} b^k / k^a, via r_m = r_{m-1} (m/(m-1))^a / b + 1.
  double best = C1, r = 0.0;
  for (long m = 1; m <= mmax; ++m) {
    r = m == 1 ? 1.0
               : r * std::pow(static_cast<double>(m) / (m - 1), a) / b + 1.0;
    best = std::max(best, r);
  }
  return best;
}

std::pair<double, double> constants_CapM(double a, double p, double M) {
  if (!(M > 0.0)) throw ValidationError("C_{a,p,M} needs M > 0");
  const double cap = constants_Cap(a, p);
  const double ln4 = std::log(4.0);
  const double C = std::pow(ln4, a) * std::pow(2.0, -1.0 / p) * M *
                   (8.0 * cap + 1.0 / (std::pow(2.0, 2.0 / p) - 1.0));
  const double Ct = std::pow(std::pow(ln4, -a * p) * std::pow(C, p) +
                                 2.0 * std::pow(M, p) *
                                     std::pow(1.0 - std::pow(2.0, -2.0 / p), -p),
                             1.0 / p);
  return {C, Ct};
}

}  // namespace roughlab
