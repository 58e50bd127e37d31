#include "elv/quadrature.hpp"

#include "elv/errors.hpp"
#include "elv/parallel.hpp"
#include "elv/special_functions.hpp"

#include <cmath>
#include <map>

namespace elv {

namespace {

// Largest |t| needed on one side: solves (1+a) X - L log X >= D for X = -log of
// the distance to the endpoint, then maps back through the transform.
double side_limit(double exponent, int log_power, int working_digits) {
  const double ln10 = std::log(10.0);
  const double target = (working_digits + 10) * ln10;
  const double slope = 1.0 + exponent;
  if (slope <= 0.0) throw domain_error("tanh_sinh: endpoint singularity is not integrable");
  double X = target / slope;
  for (int i = 0; i < 50; ++i) X = (target + log_power * std::log(std::max(X, 1.0))) / slope;
  // 1 - x ~ exp(-2u) with u = (pi/2) sinh t, so X = 2u = pi sinh t.
  return std::asinh(X / M_PI) + 0.05;
}

struct Node {
  Real x;
  Real one_minus_x;
  Real weight;
};

// Abscissa and weight for t >= 0 (the point near 1); the mirror point near 0
// swaps x and 1-x and shares the weight.
Node node_at(const Real& t, mpfr_prec_t bits) {
  Real u = ldexp(const_pi(bits), -1) * sinh(t);
  Real e = exp(-ldexp(u, 1));
  Real denom = 1L + e;
  Real x = 1L / denom;
  Real omx = e / denom;
  Real w = const_pi(bits) * cosh(t) * e / (denom * denom);
  return {std::move(x), std::move(omx), std::move(w)};
}

}  // namespace

QuadResult tanh_sinh(const Integrand& f, const PrecisionContext& ctx, int max_level) {
  const mpfr_prec_t bits = ctx.bits();
  const int working = ctx.working_digits();
  const double t_right = side_limit(f.profile.right_exponent, f.profile.right_log_power, working);
  const double t_left = side_limit(f.profile.left_exponent, f.profile.left_log_power, working);

  // Signed sample positions t = j * h for one level, as (numerator j, level).
  auto sample = [&](const std::vector<long>& js, int level) {
    std::vector<Real> values(js.size(), Real(bits));
    parallel_for(js.size(), ctx.threads(), [&](std::size_t i) {
      const long j = js[i];
      Real t = ldexp(Real(std::labs(j), bits), -level);
      Node n = node_at(t, bits);
      Real fx = (j >= 0) ? f.evaluator(n.x, n.one_minus_x, ctx) : f.evaluator(n.one_minus_x, n.x, ctx);
      if (!fx.is_finite()) {
        throw convergence_error("tanh_sinh: integrand '" + f.id + "' is not finite at t = " + t.to_string(12));
      }
      values[i] = n.weight * fx;
    });
    Real sum(bits);
    for (const auto& v : values) sum += v;
    return sum;
  };

  QuadResult result;
  const Real tolerance = pow(Real(10L, bits), static_cast<long>(-ctx.target_digits()));
  Real estimate(bits);
  for (int level = 0; level <= max_level; ++level) {
    const long scale = 1L << level;
    const long j_right = static_cast<long>(std::floor(t_right * scale));
    const long j_left = static_cast<long>(std::floor(t_left * scale));
    std::vector<long> js;
    if (level == 0) {
      for (long j = -j_left; j <= j_right; ++j) js.push_back(j);
    } else {
      for (long j = -j_left; j <= j_right; ++j) {
        if (j & 1) js.push_back(j);
      }
    }
    Real h = ldexp(Real(1L, bits), -level);
    Real fresh = sample(js, level) * h;
    if (level == 0) {
      estimate = fresh;
    } else {
      estimate = ldexp(estimate, -1) + fresh;
    }
    result.level_values.push_back(estimate);
    result.levels_used = level;
    if (level >= 2) {
      const Real& previous = result.level_values[level - 1];
      Real diff = abs(estimate - previous);
      Real scale_ref = abs(estimate).is_zero() ? Real(1L, bits) : abs(estimate);
      result.error_estimate = diff / scale_ref;
      if (result.error_estimate <= tolerance) {
        result.value = estimate;
        return result;
      }
    }
  }
  throw convergence_error("tanh_sinh: no convergence for '" + f.id + "' after level " +
                          std::to_string(max_level));
}

// ---------------------------------------------------------------- catalog

namespace {

// k' = sqrt((1-k)(1+k)) with 1+k = 2 - (1-k).
Real complement(const Real& omk) { return sqrt(omk * (2L - omk)); }

Real K_at(const Real& k, const Real& omk, const PrecisionContext& ctx) {
  (void)k;
  return ellK_from_complement(complement(omk), ctx);
}

Real Kp_at(const Real& k, const PrecisionContext& ctx) { return ellKprime(k, ctx); }

// (1 - k^2) = (1-k)(2-(1-k)).
Real one_minus_k2(const Real& omk) { return omk * (2L - omk); }

Real quarter_root_cubed_inverse(const Real& v) {
  // v^{-3/4}
  Real r = sqrt(sqrt(v));
  return 1L / (r * r * r);
}

std::map<std::string, Integrand, std::less<>> build_catalog() {
  std::map<std::string, Integrand, std::less<>> c;
  auto add = [&](std::string id, std::string description, SingularityProfile profile, Integrand::Evaluator fn) {
    Integrand it{id, std::move(fn), profile, std::move(description)};
    c.emplace(std::move(id), std::move(it));
  };
  using C = const PrecisionContext&;
  using R = const Real&;

  add("Kp", "K'(k)", {0, 1, 0, 0}, [](R k, R, C ctx) { return Kp_at(k, ctx); });
  add("K1", "K(k)", {0, 0, 0, 1}, [](R k, R omk, C ctx) { return K_at(k, omk, ctx); });
  add("k3", "K'(k)^3", {0, 3, 0, 0}, [](R k, R, C ctx) { return pow(Kp_at(k, ctx), 3L); });
  add("K3", "K(k)^3", {0, 0, 0, 3}, [](R k, R omk, C ctx) { return pow(K_at(k, omk, ctx), 3L); });
  add("kK3", "k K'(k)^3", {1, 3, 0, 0}, [](R k, R, C ctx) { return k * pow(Kp_at(k, ctx), 3L); });
  add("K2Kp", "K(k)^2 K'(k)", {0, 1, 0, 2}, [](R k, R omk, C ctx) {
    Real K = K_at(k, omk, ctx);
    return K * K * Kp_at(k, ctx);
  });
  add("EKp2", "E(k) K'(k)^2", {0, 2, 0, 1}, [](R k, R omk, C ctx) {
    Real Kp = Kp_at(k, ctx);
    return ellE_pair(k, complement(omk), ctx) * Kp * Kp;
  });
  add("h4", "K'(k)^3 / (sqrt(k) (1-k^2)^{3/4})", {-0.5, 3, -0.75, 0}, [](R k, R omk, C ctx) {
    return pow(Kp_at(k, ctx), 3L) / sqrt(k) * quarter_root_cubed_inverse(one_minus_k2(omk));
  });
  add("h4_alt", "(1+k)^3 K'(k)^3 / (k^{3/4} sqrt(1-k))", {-0.75, 3, -0.5, 0}, [](R k, R omk, C ctx) {
    return pow((2L - omk) * Kp_at(k, ctx), 3L) * quarter_root_cubed_inverse(k) / sqrt(omk);
  });
  add("h3", "K'(k)^2 K(k) / (sqrt(k) (1-k^2)^{3/4})", {-0.5, 2, -0.75, 1}, [](R k, R omk, C ctx) {
    Real Kp = Kp_at(k, ctx);
    return Kp * Kp * K_at(k, omk, ctx) / sqrt(k) * quarter_root_cubed_inverse(one_minus_k2(omk));
  });
  add("w9", "k (4 + k^2 - k^4) K'(k)^7", {1, 7, 0, 0}, [](R k, R, C ctx) {
    Real k2 = k * k;
    return k * (4L + k2 - k2 * k2) * pow(Kp_at(k, ctx), 7L);
  });
  add("w13", "k (16 - 92k^2 + 93k^4 - 2k^6 + k^8) K'(k)^11", {1, 11, 0, 0}, [](R k, R, C ctx) {
    Real k2 = k * k;
    Real poly = (((k2 - 2L) * k2 + 93L) * k2 - 92L) * k2 + 16L;
    return k * poly * pow(Kp_at(k, ctx), 11L);
  });
  add("t42a", "K(k) / sqrt(k (1-k))", {-0.5, 0, -0.5, 1}, [](R k, R omk, C ctx) {
    return K_at(k, omk, ctx) / sqrt(k * omk);
  });
  add("t42b", "K(k) / (sqrt(k) (1-k^2)^{3/4})", {-0.5, 0, -0.75, 1}, [](R k, R omk, C ctx) {
    return K_at(k, omk, ctx) / sqrt(k) * quarter_root_cubed_inverse(one_minus_k2(omk));
  });
  add("t42c", "K(k) / sqrt(1+k)", {0, 0, 0, 1}, [](R k, R omk, C ctx) {
    return K_at(k, omk, ctx) / sqrt(2L - omk);
  });
  add("i1", "K'(x) / sqrt(1+x)", {0, 1, 0, 0}, [](R x, R omx, C ctx) {
    return Kp_at(x, ctx) / sqrt(2L - omx);
  });
  add("i2", "K'(x) / sqrt(1-x)", {0, 1, -0.5, 0}, [](R x, R omx, C ctx) {
    return Kp_at(x, ctx) / sqrt(omx);
  });
  add("e6", "K(k) / sqrt(1-k^2)", {0, 0, -0.5, 1}, [](R k, R omk, C ctx) {
    return K_at(k, omk, ctx) / sqrt(one_minus_k2(omk));
  });
  add("cubic", "(3+6p)^{-1/2} K(p^{3/2} (2+p)^{1/2} / (1+2p)^{1/2})", {0, 0, 0, 1}, [](R p, R omp, C ctx) {
    // complement^2 = 1 - p^3(2+p)/(1+2p) = (1-p)(1+p)^3/(1+2p)
    Real onep = 2L - omp;
    Real kp = sqrt(omp * onep * onep * onep / (1L + ldexp(p, 1)));
    return ellK_from_complement(kp, ctx) / sqrt(3L + 6L * p);
  });
  add("K2sq", "K(k)^2", {0, 0, 0, 2}, [](R k, R omk, C ctx) { return pow(K_at(k, omk, ctx), 2L); });
  add("KKp", "K(k) K'(k) / sqrt(1-k^2)", {0, 1, -0.5, 1}, [](R k, R omk, C ctx) {
    return K_at(k, omk, ctx) * Kp_at(k, ctx) / sqrt(one_minus_k2(omk));
  });
  add("K2w", "K(k)^2 / sqrt(1-k^2)", {0, 0, -0.5, 2}, [](R k, R omk, C ctx) {
    return pow(K_at(k, omk, ctx), 2L) / sqrt(one_minus_k2(omk));
  });
  add("g3", "k K'(k)^2 K(k)", {1, 2, 0, 1}, [](R k, R omk, C ctx) {
    return k * pow(Kp_at(k, ctx), 2L) * K_at(k, omk, ctx);
  });
  add("g2m", "k K(k)^2 K'(k)", {1, 1, 0, 2}, [](R k, R omk, C ctx) {
    return k * pow(K_at(k, omk, ctx), 2L) * Kp_at(k, ctx);
  });
  add("g1", "k K(k)^3", {1, 0, 0, 3}, [](R k, R omk, C ctx) { return k * pow(K_at(k, omk, ctx), 3L); });
  add("tricomi1", "k' K'(k) - k K(k)", {0, 1, 0, 1}, [](R k, R omk, C ctx) {
    return complement(omk) * Kp_at(k, ctx) - k * K_at(k, omk, ctx);
  });
  return c;
}

const std::map<std::string, Integrand, std::less<>>& catalog() {
  static const auto table = build_catalog();
  return table;
}

}  // namespace

const Integrand& moment_integrand(std::string_view id) {
  const auto& c = catalog();
  auto it = c.find(id);
  if (it == c.end()) throw domain_error("moment: unknown integrand id '" + std::string(id) + "'");
  return it->second;
}

std::vector<std::string> moment_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, _] : catalog()) ids.push_back(id);
  return ids;
}

Real moment(std::string_view id, const PrecisionContext& ctx) {
  return tanh_sinh(moment_integrand(id), ctx).value;
}

Real lvalue_ratio_integrals(std::string_view id_a, std::string_view id_b, const PrecisionContext& ctx) {
  return moment(id_a, ctx) / moment(id_b, ctx);
}

}  // namespace elv
