#include "fastbfgs/line_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fastbfgs {

namespace {

constexpr double kTauMax = 1e10;
constexpr double kNoiseUlps = 4.0;
constexpr int kNoisyTrials = 3;

struct Trial {
  double tau = 0.0;
  LinePoint p;
  bool finite = true;
};

bool is_finite(const LinePoint& p) { return std::isfinite(p.value) && std::isfinite(p.slope); }

// Minimizer of the cubic matching values and slopes at a and b, or NaN when
// the cubic has no interior minimizer.
double cubic_minimizer(const Trial& a, const Trial& b) {
  const double d1 = a.p.slope + b.p.slope - 3.0 * (a.p.value - b.p.value) / (a.tau - b.tau);
  const double disc = d1 * d1 - a.p.slope * b.p.slope;
  if (!(disc >= 0.0)) return std::numeric_limits<double>::quiet_NaN();
  const double d2 = std::copysign(std::sqrt(disc), b.tau - a.tau);
  const double denom = b.p.slope - a.p.slope + 2.0 * d2;
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return b.tau - (b.tau - a.tau) * (b.p.slope + d2 - d1) / denom;
}

class Search {
 public:
  Search(const LineFunction& phi, LinePoint at_zero, const LineSearchOptions& opt)
      : phi_(phi), zero_(at_zero), opt_(opt) {}

  LineSearchResult run() {
    LineSearchResult res;
    if (!(zero_.slope < 0.0) || !std::isfinite(zero_.value)) {
      res.status = LineSearchStatus::degenerate_direction;
      return res;
    }
    Trial prev{0.0, zero_, true};
    double tau = std::clamp(opt_.tau_init, std::numeric_limits<double>::min(), kTauMax);
    for (int i = 0;; ++i) {
      if (evals_ >= opt_.max_evals) return finish_failed();
      const Trial cur = evaluate(tau);
      if (!cur.finite || !armijo(cur) || (i > 0 && cur.p.value >= prev.p.value)) {
        return zoom(prev, cur);
      }
      if (curvature(cur)) return finish(cur);
      if (cur.p.slope >= 0.0) return zoom(cur, prev);
      if (tau >= kTauMax) return finish_failed();
      tau = extrapolate(prev, cur);
      prev = cur;
    }
  }

 private:
  Trial evaluate(double tau) {
    ++evals_;
    Trial t{tau, phi_(tau), true};
    t.finite = is_finite(t.p);
    if (t.finite && armijo(t) && (best_.tau == 0.0 || t.p.value < best_.p.value)) best_ = t;
    return t;
  }

  bool armijo(const Trial& t) const {
    return t.p.value <= zero_.value + opt_.c1 * t.tau * zero_.slope;
  }

  bool curvature(const Trial& t) const { return std::abs(t.p.slope) <= -opt_.c2 * zero_.slope; }

  static double extrapolate(const Trial& prev, const Trial& cur) {
    const double lo = 2.0 * cur.tau;
    const double hi = 10.0 * cur.tau;
    double next = cubic_minimizer(prev, cur);
    if (!std::isfinite(next) || next <= cur.tau) next = 4.0 * cur.tau;
    return std::min(std::clamp(next, lo, hi), kTauMax);
  }

  // lo satisfies the sufficient decrease condition and has the lowest value
  // seen so far; hi brackets a strong Wolfe point together with lo.
  LineSearchResult zoom(Trial lo, Trial hi) {
    const double noise =
        kNoiseUlps * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(zero_.value));
    int noisy = 0;
    while (evals_ < opt_.max_evals) {
      const double a = std::min(lo.tau, hi.tau);
      const double b = std::max(lo.tau, hi.tau);
      const double width = b - a;
      if (width <= 1e-14 * std::max(1.0, b)) break;

      double tau = std::numeric_limits<double>::quiet_NaN();
      if (hi.finite) {
        // A value-test failure at hi says nothing reliable about its slope.
        tau = cubic_minimizer(lo, hi);
      }
      const double margin = 0.1 * width;
      if (!std::isfinite(tau) || tau < a + margin || tau > b - margin) {
        // Infinite hi: step back hard toward lo.
        tau = hi.finite ? 0.5 * (a + b) : lo.tau + 0.2 * (hi.tau - lo.tau);
      }
      const Trial cur = evaluate(tau);
      // Several trials in a row that differ from lo only by rounding mean the
      // value tests are being decided by noise; stop spending evaluations.
      if (cur.finite && std::abs(cur.p.value - lo.p.value) <= noise) {
        if (++noisy >= kNoisyTrials) break;
      } else {
        noisy = 0;
      }
      if (!cur.finite || !armijo(cur) || cur.p.value >= lo.p.value) {
        hi = cur;
        continue;
      }
      if (curvature(cur)) return finish(cur);
      if (cur.p.slope * (hi.tau - lo.tau) >= 0.0) hi = lo;
      lo = cur;
    }
    return finish_failed();
  }

  LineSearchResult finish(const Trial& t) const {
    LineSearchResult res;
    res.tau = t.tau;
    res.point = t.p;
    res.nfg_used = evals_;
    res.status = LineSearchStatus::converged;
    return res;
  }

  LineSearchResult finish_failed() const {
    LineSearchResult res;
    res.tau = best_.tau;
    res.point = best_.p;
    res.nfg_used = evals_;
    res.status = LineSearchStatus::max_evals;
    return res;
  }

  const LineFunction& phi_;
  LinePoint zero_;
  LineSearchOptions opt_;
  int evals_ = 0;
  Trial best_;
};

}  // namespace

LineSearchResult strong_wolfe(const LineFunction& phi, LinePoint at_zero,
                              const LineSearchOptions& options) {
  return Search(phi, at_zero, options).run();
}

bool satisfies_strong_wolfe(LinePoint at_zero, double tau, LinePoint at_tau, double c1, double c2) {
  return tau > 0.0 && at_tau.value <= at_zero.value + c1 * tau * at_zero.slope &&
         std::abs(at_tau.slope) <= c2 * std::abs(at_zero.slope);
}

}  // namespace fastbfgs
