// Copyright 2026 The relaymec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "relaymec/barrier.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>

#include "relaymec/model.hpp"

namespace relaymec::convex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Transmit durations shorter than param / kMaxRate cost more than e^600
// times the link's noise energy and are excluded up front, which also
// keeps every iterate's exponent finite.
constexpr double kMaxRate = 600.0;
constexpr double kDualGap = 1e-8;  // relative gap at which multipliers are read

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Separable objective over a dense variable vector.
struct Objective {
  std::function<double(const VectorXd&)> value;
  // Gradient and diagonal Hessian.
  std::function<void(const VectorXd&, VectorXd&, VectorXd&)> derivatives;
};

// Feasible region b - A z > 0.
struct Region {
  MatrixXd a;
  VectorXd b;

  VectorXd slack(const VectorXd& z) const { return b - a * z; }
};

bool strictly_positive(const VectorXd& v) { return (v.array() > 0.0).all(); }

double barrier_value(const Objective& obj, const Region& region, double t,
                     const VectorXd& z) {
  const VectorXd slack = region.slack(z);
  if (!strictly_positive(slack)) return kInf;
  const double f = obj.value(z);
  if (!std::isfinite(f)) return kInf;
  return t * f - slack.array().log().sum();
}

// Damped Newton on t f(z) - sum log(slack). Returns steps taken.
int center(const Objective& obj, const Region& region, double t, VectorXd& z,
           int max_steps, const std::function<bool(const VectorXd&)>& done) {
  const Eigen::Index k = z.size();
  VectorXd grad(k), hdiag(k);
  int steps = 0;
  for (; steps < max_steps; ++steps) {
    const VectorXd slack = region.slack(z);
    const VectorXd inv = slack.cwiseInverse();
    obj.derivatives(z, grad, hdiag);
    const VectorXd g = t * grad + region.a.transpose() * inv;
    MatrixXd h = region.a.transpose() * inv.cwiseAbs2().asDiagonal() * region.a;
    h.diagonal() += t * hdiag;
    Eigen::LDLT<MatrixXd> ldlt(h);
    VectorXd step = ldlt.solve(-g);
    if (ldlt.info() != Eigen::Success || !step.allFinite()) {
      h.diagonal().array() += 1e-12 * h.diagonal().cwiseAbs().maxCoeff();
      step = h.ldlt().solve(-g);
      if (!step.allFinite()) break;
    }
    const double decrement = -g.dot(step);
    if (!(decrement > 2e-12)) break;

    const double f0 = barrier_value(obj, region, t, z);
    double alpha = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 80; ++ls, alpha *= 0.5) {
      const VectorXd trial = z + alpha * step;
      const double f1 = barrier_value(obj, region, t, trial);
      if (f1 <= f0 - 0.25 * alpha * decrement) {
        z = trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    if (done && done(z)) {
      ++steps;
      break;
    }
  }
  return steps;
}

}  // namespace

double Term::value(double x) const {
  switch (kind) {
    case Kind::kNone:
      return 0.0;
    case Kind::kTransmission: {
      if (!(x > 0.0)) return kInf;
      const double r = param / x;
      return r > 700.0 ? kInf : coef * x * std::expm1(r);
    }
    case Kind::kCompute:
      return x > 0.0 ? coef / (x * x) : kInf;
  }
  return 0.0;
}

double Term::first(double x) const {
  switch (kind) {
    case Kind::kNone:
      return 0.0;
    case Kind::kTransmission:
      return -coef * transmission_slope_kernel(param / x);
    case Kind::kCompute:
      return -2.0 * coef / (x * x * x);
  }
  return 0.0;
}

double Term::second(double x) const {
  switch (kind) {
    case Kind::kNone:
      return 0.0;
    case Kind::kTransmission: {
      const double r = param / x;
      return coef * r * r * std::exp(r) / x;
    }
    case Kind::kCompute:
      return 6.0 * coef / (x * x * x * x);
  }
  return 0.0;
}

Result minimize(const Program& program, const Options& options) {
  const int n = static_cast<int>(program.objective.size());
  const double scale = program.time_scale;
  Result out;

  // Scaled variables y = x / scale; bounds become rows -y_i <= -lb_i.
  std::vector<double> lower(program.lower.begin(), program.lower.end());
  for (int i = 0; i < n; ++i) {
    const Term& term = program.objective[static_cast<size_t>(i)];
    if (term.kind == Term::Kind::kTransmission) {
      lower[static_cast<size_t>(i)] =
          std::max(lower[static_cast<size_t>(i)], term.param / kMaxRate);
    }
  }
  const int m_rows = static_cast<int>(program.rows.size());
  const int m = m_rows + n;
  MatrixXd a = MatrixXd::Zero(m, n);
  VectorXd b(m);
  for (int j = 0; j < m_rows; ++j) {
    const Row& row = program.rows[static_cast<size_t>(j)];
    for (const auto& [var, coef] : row.coeffs) a(j, var) += coef;
    b(j) = row.rhs / scale;
  }
  for (int i = 0; i < n; ++i) {
    a(m_rows + i, i) = -1.0;
    b(m_rows + i) = -lower[static_cast<size_t>(i)] / scale;
  }

  // Phase I: minimise s subject to A y - s <= b and s >= -1.
  VectorXd y = -b.tail(n) + VectorXd::Constant(n, 0.01);
  const double violation = (a * y - b).maxCoeff();
  if (!(violation < 0.0)) {
    Region region;
    region.a = MatrixXd::Zero(m + 1, n + 1);
    region.a.topLeftCorner(m, n) = a;
    region.a.col(n).head(m).setConstant(-1.0);
    region.a(m, n) = -1.0;
    region.b.resize(m + 1);
    region.b.head(m) = b;
    region.b(m) = 1.0;
    Objective obj;
    obj.value = [n](const VectorXd& z) { return z(n); };
    obj.derivatives = [n](const VectorXd& z, VectorXd& g, VectorXd& h) {
      g.setZero(z.size());
      g(n) = 1.0;
      h.setZero(z.size());
    };
    VectorXd z(n + 1);
    z.head(n) = y;
    z(n) = violation + 1.0;
    constexpr double kMargin = 1e-9;
    auto feasible_now = [n](const VectorXd& v) { return v(n) < -kMargin; };
    double t = 1.0;
    for (int outer = 0; outer < 60 && !feasible_now(z); ++outer) {
      out.newton_steps +=
          center(obj, region, t, z, options.max_newton, feasible_now);
      if (feasible_now(z) || (m + 1) / t < 1e-14) break;
      t *= options.growth;
    }
    if (!feasible_now(z)) {
      out.reason = "no strictly feasible point";
      return out;
    }
    y = z.head(n);
  }

  // Phase II on the scaled energy.
  auto phys = [scale](double yi) { return yi * scale; };
  double energy_scale = 0.0;
  for (int i = 0; i < n; ++i) {
    energy_scale += program.objective[static_cast<size_t>(i)].value(phys(y(i)));
  }
  Region region{a, b};
  double t = static_cast<double>(m);
  bool have_duals = false;
  auto capture_duals = [&](double at_t) {
    const VectorXd slack = region.slack(y);
    const double dual_scale = energy_scale > 0.0 ? energy_scale / scale : 0.0;
    out.row_duals.resize(static_cast<size_t>(m_rows));
    out.bound_duals.resize(static_cast<size_t>(n));
    for (int j = 0; j < m_rows; ++j) {
      out.row_duals[static_cast<size_t>(j)] = dual_scale / (at_t * slack(j));
    }
    for (int i = 0; i < n; ++i) {
      out.bound_duals[static_cast<size_t>(i)] =
          dual_scale / (at_t * slack(m_rows + i));
    }
    have_duals = true;
  };
  if (energy_scale > 0.0 && std::isfinite(energy_scale)) {
    Objective obj;
    obj.value = [&](const VectorXd& v) {
      double f = 0.0;
      for (int i = 0; i < n; ++i) {
        f += program.objective[static_cast<size_t>(i)].value(phys(v(i)));
      }
      return f / energy_scale;
    };
    obj.derivatives = [&](const VectorXd& v, VectorXd& g, VectorXd& h) {
      g.resize(n);
      h.resize(n);
      for (int i = 0; i < n; ++i) {
        const Term& term = program.objective[static_cast<size_t>(i)];
        const double x = phys(v(i));
        g(i) = term.first(x) * scale / energy_scale;
        h(i) = term.second(x) * scale * scale / energy_scale;
      }
    };
    int rescales = 0;
    for (int outer = 0; outer < 200; ++outer) {
      out.newton_steps += center(obj, region, t, y, options.max_newton, {});
      double f = obj.value(y);
      // The start can cost many orders of magnitude more than the optimum;
      // renormalise so the gap test stays relative. t / energy_scale, and
      // with it the central path, is unchanged.
      if (f > 0.0 && f < 1e-6 && rescales < 40) {
        energy_scale *= f;
        t *= f;
        f = 1.0;
        ++rescales;
      }
      // Multipliers come from the central path while the slacks are still
      // well above rounding level.
      if (!have_duals && m / t <= kDualGap * std::max(f, 1e-9)) {
        capture_duals(t);
      }
      if (m / t <= options.gap_tol * std::max(f, 1e-9)) break;
      t *= options.growth;
    }
  } else if (!std::isfinite(energy_scale)) {
    out.reason = "no finite-energy starting point";
    return out;
  }
  if (!have_duals) capture_duals(t);

  out.x.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out.x[static_cast<size_t>(i)] = phys(y(i));
  // Energy-free variables that only ever tighten constraints go to their
  // bound exactly.
  for (int i = 0; i < n; ++i) {
    if (program.objective[static_cast<size_t>(i)].kind != Term::Kind::kNone) {
      continue;
    }
    bool only_tightens = true;
    for (int j = 0; j < m_rows; ++j) only_tightens &= a(j, i) >= 0.0;
    if (only_tightens) {
      out.x[static_cast<size_t>(i)] = program.lower[static_cast<size_t>(i)];
    }
  }
  out.value = 0.0;
  for (int i = 0; i < n; ++i) {
    out.value += program.objective[static_cast<size_t>(i)].value(
        out.x[static_cast<size_t>(i)]);
  }
  out.feasible = true;
  return out;
}

}  // namespace relaymec::convex
