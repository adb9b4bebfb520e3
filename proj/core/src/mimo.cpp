#include "laesim/mimo.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace laesim {

namespace {

Eigen::VectorXcd phase_normalize(Eigen::VectorXcd v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-300) {
      v *= std::conj(v[i]) / std::abs(v[i]);
      return v;
    }
  }
  return v;
}

}  // namespace

Precoder mrt_precoder(const StackedChannel& h, double power_w) {
  if (power_w <= 0.0) throw std::invalid_argument("mrt_precoder: power must be positive");
  if (h.h.size() == 0 || h.h.norm() == 0.0)
    throw std::invalid_argument("mrt_precoder: degenerate channel");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h.h, Eigen::ComputeThinV);
  Eigen::VectorXcd v1 = phase_normalize(svd.matrixV().col(0));
  Precoder p;
  p.fleet = h.fleet;
  p.w = std::sqrt(power_w) * v1;
  p.power_budget_w = power_w;
  return p;
}

Combiner mmse_combiner(const std::vector<Eigen::VectorXcd>& effective, int k,
                       double noise_w) {
  if (effective.empty()) throw std::invalid_argument("mmse_combiner: no channels");
  const Eigen::Index m = effective.front().size();
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(m, m);
  for (const auto& h : effective) a += h * h.adjoint();
  a += noise_w * Eigen::MatrixXcd::Identity(m, m);
  // Noise keeps A positive definite in every physical run; the trace-scaled
  // floor only guards a zero-noise corner.
  double floor = 1e-15 * a.real().trace() / static_cast<double>(m);
  if (a.real().trace() <= 0.0) floor = 1e-300;
  Eigen::LDLT<Eigen::MatrixXcd> ldlt(a);
  Combiner c;
  c.fleet = k;
  if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
    c.u = ldlt.solve(effective[static_cast<size_t>(k)]);
  } else {
    a += floor * Eigen::MatrixXcd::Identity(m, m);
    c.u = a.ldlt().solve(effective[static_cast<size_t>(k)]);
  }
  return c;
}

double sinr(int k, const std::vector<Eigen::VectorXcd>& effective,
            const Combiner& comb, double noise_w) {
  const auto uk = static_cast<size_t>(k);
  double signal = std::norm(comb.u.dot(effective[uk]));
  double interference = 0.0;
  for (size_t j = 0; j < effective.size(); ++j) {
    if (j == uk) continue;
    interference += std::norm(comb.u.dot(effective[j]));
  }
  double denom = interference + noise_w * comb.u.squaredNorm();
  if (denom <= 0.0) return 0.0;
  return signal / denom;
}

SlotEffective effective_directions(const std::vector<StackedChannel>& channels) {
  SlotEffective eff;
  const Eigen::Index k = static_cast<Eigen::Index>(channels.size());
  eff.unit_effective.reserve(channels.size());
  for (const auto& ch : channels) {
    Precoder p = mrt_precoder(ch, 1.0);
    eff.unit_effective.push_back(ch.h * p.w);
  }
  eff.gram.resize(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      eff.gram(i, j) = eff.unit_effective[static_cast<size_t>(i)].dot(
          eff.unit_effective[static_cast<size_t>(j)]);
  return eff;
}

RatePoint rates_at_power(const SlotEffective& eff, double power_w, double noise_w) {
  const Eigen::Index k = eff.gram.rows();
  RatePoint out;
  out.sinr.assign(static_cast<size_t>(k), 0.0);
  out.rate_bps_hz.assign(static_cast<size_t>(k), 0.0);
  if (power_w <= 0.0) return out;
  // SINR_i = (P g_ii - P^2 c^H (noise I + P G_-i)^-1 c) / noise with G_-i the
  // Gram of the interferers and c their inner products with fleet i.
  for (Eigen::Index i = 0; i < k; ++i) {
    double s;
    if (k == 1) {
      s = power_w * eff.gram(0, 0).real() / noise_w;
    } else {
      Eigen::MatrixXcd b(k - 1, k - 1);
      Eigen::VectorXcd c(k - 1);
      Eigen::Index r = 0;
      for (Eigen::Index p = 0; p < k; ++p) {
        if (p == i) continue;
        c[r] = eff.gram(p, i);
        Eigen::Index q2 = 0;
        for (Eigen::Index q = 0; q < k; ++q) {
          if (q == i) continue;
          b(r, q2) = power_w * eff.gram(p, q);
          ++q2;
        }
        b(r, r) += noise_w;
        ++r;
      }
      const std::complex<double> quad = c.dot(b.ldlt().solve(c));
      s = (power_w * eff.gram(i, i).real() - power_w * power_w * quad.real()) / noise_w;
      s = std::max(s, 0.0);
    }
    out.sinr[static_cast<size_t>(i)] = s;
    out.rate_bps_hz[static_cast<size_t>(i)] = std::log2(1.0 + s);
    out.sum_rate_bps_hz += out.rate_bps_hz[static_cast<size_t>(i)];
  }
  return out;
}

RatePoint slot_rates(const std::vector<StackedChannel>& channels,
                     const std::vector<double>& power_w, double noise_w) {
  if (channels.size() != power_w.size())
    throw std::invalid_argument("slot_rates: power count mismatch");
  const size_t k = channels.size();
  RatePoint out;
  out.sinr.assign(k, 0.0);
  out.rate_bps_hz.assign(k, 0.0);
  std::vector<Eigen::VectorXcd> effective(k);
  bool any_active = false;
  for (size_t i = 0; i < k; ++i) {
    if (power_w[i] <= 0.0) {
      effective[i] = Eigen::VectorXcd::Zero(channels[i].h.rows());
      continue;
    }
    Precoder p = mrt_precoder(channels[i], power_w[i]);
    effective[i] = channels[i].h * p.w;
    any_active = true;
  }
  if (!any_active) return out;
  for (size_t i = 0; i < k; ++i) {
    if (power_w[i] <= 0.0) continue;
    Combiner c = mmse_combiner(effective, static_cast<int>(i), noise_w);
    out.sinr[i] = sinr(static_cast<int>(i), effective, c, noise_w);
    out.rate_bps_hz[i] = std::log2(1.0 + out.sinr[i]);
    out.sum_rate_bps_hz += out.rate_bps_hz[i];
  }
  return out;
}

MinPowerResult min_power_for_rate(const std::function<double(double)>& metric_at_power,
                                  double target, PowerBracket bracket, double tol_db) {
  if (bracket.min_w <= 0.0 || bracket.max_w <= bracket.min_w)
    throw std::invalid_argument("min_power_for_rate: bad bracket");
  MinPowerResult r;
  if (metric_at_power(bracket.max_w) < target) return r;
  r.reachable = true;
  if (metric_at_power(bracket.min_w) >= target) {
    r.power_w = bracket.min_w;
    return r;
  }
  double lo = std::log10(bracket.min_w);
  double hi = std::log10(bracket.max_w);
  const double tol = tol_db / 10.0;  // decades
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (metric_at_power(std::pow(10.0, mid)) >= target)
      hi = mid;
    else
      lo = mid;
  }
  r.power_w = std::pow(10.0, hi);
  return r;
}

MinPowerResult min_power_for_rate(std::span<const SlotChannels> slots, double target,
                                  PowerMetric metric, double noise_w,
                                  PowerBracket bracket, double tol_db) {
  if (slots.empty()) throw std::invalid_argument("min_power_for_rate: no slots");
  std::vector<SlotEffective> eff;
  eff.reserve(slots.size());
  size_t fleets = slots.front().per_fleet.size();
  for (const auto& s : slots) {
    if (s.per_fleet.size() != fleets)
      throw std::invalid_argument("min_power_for_rate: fleet count varies");
    eff.push_back(effective_directions(s.per_fleet));
  }
  auto metric_at = [&](double p) {
    std::vector<double> acc(fleets, 0.0);
    for (const auto& e : eff) {
      RatePoint rp = rates_at_power(e, p, noise_w);
      for (size_t i = 0; i < fleets; ++i) acc[i] += rp.rate_bps_hz[i];
    }
    for (auto& a : acc) a /= static_cast<double>(eff.size());
    if (metric == PowerMetric::Sum) {
      double s = 0.0;
      for (double a : acc) s += a;
      return s;
    }
    double mn = acc.front();
    for (double a : acc) mn = std::min(mn, a);
    return mn;
  };
  return min_power_for_rate(metric_at, target, bracket, tol_db);
}

}  // namespace laesim
