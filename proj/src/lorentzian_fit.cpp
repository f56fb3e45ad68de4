// Copyright 2026 The fresure Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "fresure/error.hpp"
#include "fresure/spectra.hpp"

namespace fresure {
namespace {

// Maps the free parameter vector onto per-peak (position, height, width),
// tying heights and/or widths across peaks as the constraint requires.
class ParameterLayout {
 public:
  ParameterLayout(std::size_t n_peaks, PeakConstraint constraint)
      : n_(n_peaks), constraint_(constraint) {}

  std::size_t size() const {
    switch (constraint_) {
      case PeakConstraint::none:
        return 3 * n_;
      case PeakConstraint::equal_width:
        return 2 * n_ + 1;
      case PeakConstraint::equal_width_and_height:
        return n_ + 2;
    }
    return 0;
  }
  std::size_t position(std::size_t i) const { return i; }
  std::size_t height(std::size_t i) const {
    return constraint_ == PeakConstraint::equal_width_and_height ? n_ : n_ + i;
  }
  std::size_t width(std::size_t i) const {
    switch (constraint_) {
      case PeakConstraint::none:
        return 2 * n_ + i;
      case PeakConstraint::equal_width:
        return 2 * n_;
      case PeakConstraint::equal_width_and_height:
        return n_ + 1;
    }
    return 0;
  }

  Eigen::VectorXd pack(const std::vector<LorentzianPeak>& peaks) const {
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(size()));
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(theta.size());
    for (std::size_t i = 0; i < n_; ++i) {
      add(theta, counts, position(i), peaks[i].position_hz);
      add(theta, counts, height(i), peaks[i].height);
      add(theta, counts, width(i), peaks[i].fwhm_hz);
    }
    return theta.cwiseQuotient(counts);
  }

  std::vector<LorentzianPeak> unpack(const Eigen::VectorXd& theta) const {
    std::vector<LorentzianPeak> peaks(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      peaks[i] = {theta(idx(position(i))), theta(idx(height(i))), theta(idx(width(i)))};
    }
    return peaks;
  }

  static Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

 private:
  static void add(Eigen::VectorXd& theta, Eigen::VectorXd& counts, std::size_t i, double v) {
    theta(idx(i)) += v;
    counts(idx(i)) += 1.0;
  }

  std::size_t n_;
  PeakConstraint constraint_;
};

struct Problem {
  std::span<const double> f;
  std::span<const double> y;
  ParameterLayout layout;
  std::vector<PositionBound> bounds;
  double min_width;
  double max_width;

  // Box limits per free parameter.
  void limits(Eigen::VectorXd& lo, Eigen::VectorXd& hi) const {
    const auto n = static_cast<Eigen::Index>(layout.size());
    lo.setConstant(n, -std::numeric_limits<double>::infinity());
    hi.setConstant(n, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < bounds.size(); ++i) {
      lo(ParameterLayout::idx(layout.position(i))) = bounds[i].lo_hz;
      hi(ParameterLayout::idx(layout.position(i))) = bounds[i].hi_hz;
      lo(ParameterLayout::idx(layout.height(i))) = 0.0;
      lo(ParameterLayout::idx(layout.width(i))) = min_width;
      hi(ParameterLayout::idx(layout.width(i))) = max_width;
    }
  }

  void project(Eigen::VectorXd& theta) const {
    Eigen::VectorXd lo, hi;
    limits(lo, hi);
    theta = theta.cwiseMax(lo).cwiseMin(hi);
  }

  double cost(const Eigen::VectorXd& theta) const {
    const auto peaks = layout.unpack(theta);
    double c = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
      double model = 0.0;
      for (const auto& pk : peaks) {
        model += lorentzian(pk, f[k]);
      }
      const double r = model - y[k];
      c += r * r;
    }
    return c;
  }

  void linearize(const Eigen::VectorXd& theta, Eigen::MatrixXd& jac, Eigen::VectorXd& resid) const {
    const auto peaks = layout.unpack(theta);
    const auto m = static_cast<Eigen::Index>(f.size());
    jac.setZero(m, theta.size());
    resid.resize(m);
    for (Eigen::Index k = 0; k < m; ++k) {
      const double fk = f[static_cast<std::size_t>(k)];
      double model = 0.0;
      for (std::size_t i = 0; i < peaks.size(); ++i) {
        const auto& pk = peaks[i];
        const double g = 0.5 * pk.fwhm_hz;
        const double dx = fk - pk.position_hz;
        const double denom = dx * dx + g * g;
        const double shape = g * g / denom;
        model += pk.height * shape;
        jac(k, ParameterLayout::idx(layout.height(i))) += shape;
        jac(k, ParameterLayout::idx(layout.position(i))) += pk.height * shape * 2.0 * dx / denom;
        jac(k, ParameterLayout::idx(layout.width(i))) += pk.height * g * dx * dx / (denom * denom);
      }
      resid(k) = model - y[static_cast<std::size_t>(k)];
    }
  }
};

}  // namespace

double lorentzian(const LorentzianPeak& peak, double f) {
  const double g = 0.5 * peak.fwhm_hz;
  const double dx = f - peak.position_hz;
  return peak.height * g * g / (dx * dx + g * g);
}

std::size_t count_local_maxima(std::span<const double> values) {
  std::size_t count = 0;
  const std::size_t n = values.size();
  std::size_t i = 1;
  while (i + 1 < n) {
    if (values[i] > values[i - 1]) {
      std::size_t j = i;
      while (j + 1 < n && values[j + 1] == values[i]) {
        ++j;
      }
      if (j + 1 < n && values[j + 1] < values[i]) {
        ++count;
      }
      i = j + 1;
    } else {
      ++i;
    }
  }
  return count;
}

MultiLorentzianFit fit_lorentzians(std::span<const double> freq_hz, std::span<const double> values,
                                   const MultiLorentzianRequest& request) {
  const std::size_t n_peaks = request.init.size();
  if (n_peaks == 0) {
    throw ArgumentError("fit needs at least one initial peak");
  }
  if (request.bounds.size() != n_peaks) {
    throw ArgumentError("fit needs one position bound per peak");
  }
  if (freq_hz.size() != values.size()) {
    throw ArgumentError("fit: frequency and value arrays differ in length");
  }
  for (std::size_t i = 0; i < n_peaks; ++i) {
    const auto& b = request.bounds[i];
    const double p = request.init[i].position_hz;
    if (!(b.lo_hz <= p && p <= b.hi_hz)) {
      throw ArgumentError("initial position " + std::to_string(p) + " Hz outside its bounds");
    }
    if (!(request.init[i].fwhm_hz > 0.0)) {
      throw ArgumentError("initial widths must be positive");
    }
  }

  std::size_t first = 0;
  while (first < freq_hz.size() && !request.window.contains(freq_hz[first])) {
    ++first;
  }
  std::size_t last = first;
  while (last < freq_hz.size() && request.window.contains(freq_hz[last])) {
    ++last;
  }
  if (last - first < 3) {
    throw ArgumentError("fit window holds fewer than 3 samples");
  }
  const std::span<const double> f = freq_hz.subspan(first, last - first);
  const std::span<const double> y = values.subspan(first, last - first);
  const double spacing = std::abs(f[1] - f[0]);
  const double span_hz = std::abs(f.back() - f.front());

  Problem problem{f, y, ParameterLayout(n_peaks, request.constraint), request.bounds,
                  std::max(1e-6, 0.01 * spacing), 100.0 * std::max(span_hz, spacing)};

  Eigen::VectorXd theta = problem.layout.pack(request.init);
  problem.project(theta);
  double cost = problem.cost(theta);

  Eigen::MatrixXd jac;
  Eigen::VectorXd resid;
  double mu = -1.0;
  bool converged = cost == 0.0;
  int iter = 0;
  Eigen::VectorXd lo, hi;
  problem.limits(lo, hi);
  for (; iter < request.max_iterations && !converged; ++iter) {
    problem.linearize(theta, jac, resid);
    Eigen::MatrixXd a = jac.transpose() * jac;
    Eigen::VectorXd g = jac.transpose() * resid;
    // Parameters pinned on a bound with the descent direction pointing out
    // are held fixed for this step.
    for (Eigen::Index j = 0; j < theta.size(); ++j) {
      const bool at_lo = theta(j) <= lo(j) && g(j) > 0.0;
      const bool at_hi = theta(j) >= hi(j) && g(j) < 0.0;
      if (at_lo || at_hi) {
        a.row(j).setZero();
        a.col(j).setZero();
        g(j) = 0.0;
      }
    }
    const double max_diag = a.diagonal().maxCoeff();
    if (!(max_diag > 0.0) || g.isZero(0.0)) {
      converged = true;
      break;
    }
    if (mu < 0.0) {
      mu = 1e-3;
    }
    bool accepted = false;
    while (!accepted) {
      Eigen::MatrixXd damped = a;
      for (Eigen::Index i = 0; i < a.rows(); ++i) {
        damped(i, i) += a(i, i) == 0.0 ? 1.0 : mu * std::max(a(i, i), 1e-12 * max_diag);
      }
      Eigen::VectorXd candidate = theta - damped.ldlt().solve(g);
      problem.project(candidate);
      const double new_cost = problem.cost(candidate);
      if (std::isfinite(new_cost) && new_cost < cost) {
        const double rel = (cost - new_cost) / cost;
        theta = candidate;
        cost = new_cost;
        mu = std::max(mu / 3.0, 1e-15);
        accepted = true;
        converged = rel < request.relative_tolerance || cost == 0.0;
      } else {
        mu *= 4.0;
        if (mu > 1e20) {
          // No damped step lowers the cost: stationary point within the bounds.
          converged = true;
          break;
        }
      }
    }
  }

  MultiLorentzianFit fit;
  fit.constraint = request.constraint;
  fit.iterations = iter;
  fit.converged = converged;
  fit.cost = cost;
  fit.parameters = problem.layout.unpack(theta);
  fit.freq_hz.assign(f.begin(), f.end());
  fit.fitted_curve.assign(f.size(), 0.0);
  for (std::size_t k = 0; k < f.size(); ++k) {
    for (const auto& pk : fit.parameters) {
      fit.fitted_curve[k] += lorentzian(pk, f[k]);
    }
  }
  fit.local_maxima = count_local_maxima(fit.fitted_curve);

  // Standard errors from the Gauss-Newton covariance at the solution.
  problem.linearize(theta, jac, resid);
  const Eigen::MatrixXd a = jac.transpose() * jac;
  const double dof = std::max<double>(1.0, static_cast<double>(f.size()) -
                                               static_cast<double>(theta.size()));
  const double s2 = cost / dof;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  Eigen::VectorXd var = Eigen::VectorXd::Constant(theta.size(), std::numeric_limits<double>::quiet_NaN());
  if (lu.isInvertible()) {
    var = lu.inverse().diagonal() * s2;
  }
  for (std::size_t i = 0; i < n_peaks; ++i) {
    const auto& pk = fit.parameters[i];
    PeakEstimate est;
    est.position_hz = pk.position_hz;
    est.height = pk.height;
    est.fwhm_hz = pk.fwhm_hz;
    est.fwhm_lorentz_hz = pk.fwhm_hz;
    const double v = var(ParameterLayout::idx(problem.layout.position(i)));
    est.position_uncertainty_hz = v >= 0.0 ? std::sqrt(v) : std::numeric_limits<double>::quiet_NaN();
    fit.peaks.push_back(est);
  }
  return fit;
}

MultiLorentzianFit fit_multi_lorentzian(const Spectrum& spec, const MultiLorentzianRequest& request) {
  if (request.init.size() != 3 && request.init.size() != 4) {
    throw ArgumentError("multi-Lorentzian fit supports 3 or 4 peaks, got " +
                        std::to_string(request.init.size()));
  }
  return fit_lorentzians(spec.freq_hz, spec.amplitude, request);
}

}  // namespace fresure
