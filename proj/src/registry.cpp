#include "elv/registry.hpp"

#include "elv/closed_form.hpp"
#include "elv/errors.hpp"
#include "elv/lattice_sums.hpp"
#include "elv/lseries.hpp"
#include "elv/parallel.hpp"
#include "elv/quadrature.hpp"
#include "elv/special_functions.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <regex>

namespace elv {

// ---------------------------------------------------------------- loading

Registry Registry::from_json(const json& doc) {
  Registry reg;
  const json& list = doc.is_object() ? doc.at("records") : doc;
  for (const auto& j : list) {
    IdentityRecord r;
    r.id = j.at("id").get<std::string>();
    r.description = j.value("description", "");
    r.method = j.at("method").get<std::string>();
    r.anchor = j.value("anchor", "");
    r.target = j.value("target", 40);
    r.lhs = j.at("lhs");
    r.rhs = j.value("rhs", json());
    for (const auto& [k, v] : j.items()) {
      if (k != "id" && k != "description" && k != "method" && k != "anchor" && k != "target" && k != "lhs" &&
          k != "rhs") {
        r.extra[k] = v;
      }
    }
    static const std::vector<std::string> methods{"numeric-compare", "exact-series", "multiplicative",
                                                  "rational-ratio", "monotone-limit"};
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
      throw parse_error("registry record '" + r.id + "': unknown method '" + r.method + "'");
    }
    reg.records_.push_back(std::move(r));
  }
  std::sort(reg.records_.begin(), reg.records_.end(),
            [](const IdentityRecord& a, const IdentityRecord& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < reg.records_.size(); ++i) {
    if (reg.records_[i].id == reg.records_[i - 1].id) throw parse_error("registry: duplicate id '" + reg.records_[i].id + "'");
  }
  return reg;
}

Registry Registry::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("registry: cannot open '" + path + "'");
  try {
    return from_json(json::parse(in, nullptr, true, true));
  } catch (const json::exception& e) {
    throw parse_error("registry '" + path + "': " + e.what());
  }
}

const IdentityRecord& Registry::find(std::string_view id) const {
  auto it = std::lower_bound(records_.begin(), records_.end(), id,
                             [](const IdentityRecord& r, std::string_view v) { return r.id < v; });
  if (it == records_.end() || it->id != id) throw domain_error("unknown record id '" + std::string(id) + "'");
  return *it;
}

std::vector<const IdentityRecord*> Registry::matching(std::string_view pattern) const {
  std::vector<const IdentityRecord*> out;
  for (const auto& r : records_) {
    if (glob_match(pattern, r.id)) out.push_back(&r);
  }
  return out;
}

std::string default_registry_path() {
  if (const char* env = std::getenv("ELV_REGISTRY")) return env;
  return std::string(ELV_DATA_DIR) + "/registry.json";
}

const Registry& default_registry() {
  static const Registry reg = Registry::load(default_registry_path());
  return reg;
}

bool glob_match(std::string_view p, std::string_view s) {
  std::size_t pi = 0, si = 0, star = std::string_view::npos, mark = 0;
  while (si < s.size()) {
    if (pi < p.size() && (p[pi] == '?' || p[pi] == s[si])) {
      ++pi;
      ++si;
    } else if (pi < p.size() && p[pi] == '*') {
      star = pi++;
      mark = si;
    } else if (star != std::string_view::npos) {
      pi = star + 1;
      si = ++mark;
    } else {
      return false;
    }
  }
  while (pi < p.size() && p[pi] == '*') ++pi;
  return pi == p.size();
}

// ---------------------------------------------------------------- recipes

namespace {

Real parse_number(const std::string& text, mpfr_prec_t bits, const PrecisionContext& ctx) {
  static const std::regex decimal(R"(^\s*[-+]?(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?\s*$)");
  if (std::regex_match(text, decimal)) return Real(std::string_view(text), bits);
  return evaluate(parse_closed_form_sum(text), ctx.with_target(ctx.target_digits())).with_bits(bits);
}

std::string arg_string(const json& args, const char* key) {
  const json& v = args.at(key);
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::vector<mpq_class> rational_list(const json& arr) {
  std::vector<mpq_class> out;
  for (const auto& v : arr) {
    mpq_class q(v.is_string() ? v.get<std::string>() : v.dump());
    q.canonicalize();
    out.push_back(q);
  }
  return out;
}

// sum a_n n^-s x^n over the q-expansion of a named form, x = q^power at the
// nome of the modulus k.
Real generating_series(const ModularFormSpec& f, int s, const Real& x, const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  const double lx = -std::log(x.to_double());
  const long N = static_cast<long>(std::ceil((ctx.working_digits() + 10) * std::log(10.0) / lx)) + 50;
  QSeries a = eta_combination_expand(f.source, N);
  Real sum(bits), xn(1L, bits);
  long prev = 0;
  for (long n = 1; n <= N; ++n) {
    const mpz_class an = a.a(n);
    if (an == 0) continue;
    xn *= pow(x, n - prev);
    prev = n;
    sum += Real(an, bits) * xn / pow(Real(n, bits), static_cast<long>(s));
  }
  return sum;
}

// Modulus from args: either "k" or "one_minus_k" (accurate near k = 1).
struct Modulus {
  Real k, kprime;
};
Modulus modulus_arg(const json& args, const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  if (args.contains("one_minus_k")) {
    Real omk = parse_number(arg_string(args, "one_minus_k"), bits, ctx);
    return {1L - omk, sqrt(omk * (2L - omk))};
  }
  Real k = parse_number(arg_string(args, "k"), bits, ctx);
  return {k, sqrt((1L - k) * (1L + k))};
}

}  // namespace

Real evaluate_recipe(const json& recipe, const PrecisionContext& ctx) {
  const std::string op = recipe.at("op").get<std::string>();
  const json args = recipe.value("args", json::object());
  const mpfr_prec_t bits = ctx.bits();

  if (op == "closed_form") return evaluate(parse_closed_form_sum(arg_string(args, "text")), ctx);
  if (op == "number") return parse_number(arg_string(args, "value"), bits, ctx);
  if (op == "moment") return moment(arg_string(args, "id"), ctx);
  if (op == "lvalue") {
    LValueOptions opt;
    if (args.contains("y0")) opt.y0 = std::stod(arg_string(args, "y0"));
    return lvalue(named_form(arg_string(args, "form")), args.at("s").get<int>(), ctx, opt);
  }
  if (op == "lvalue_weight3") return lvalue_weight3(args.at("r").get<int>(), args.at("s").get<int>(), ctx);
  if (op == "lvalue_weight9") return lvalue_weight9_s8(ctx);
  if (op == "lattice") {
    LatticeSumSpec spec = parse_lattice_spec(arg_string(args, "spec"));
    const std::string order = args.value("order", "rectangle");
    if (order == "ellipse") return ellipse_sum(spec, ctx, ctx.target_digits()).value;
    if (order == "rectangle") return accelerated_sum(spec, ctx, ctx.target_digits()).value;
    throw domain_error("lattice: unknown order '" + order + "'");
  }
  if (op == "g2") return g2(parse_number(arg_string(args, "y"), bits, ctx), ctx);
  if (op == "pFq") {
    Real z = parse_number(args.contains("z") ? arg_string(args, "z") : "1", bits, ctx);
    return pFq(rational_list(args.at("upper")), rational_list(args.at("lower")), z, ctx, true).value;
  }
  if (op == "linear") {
    Real sum(bits);
    for (const auto& t : args.at("terms")) {
      Real c = t.contains("coef") ? parse_number(arg_string(t, "coef"), bits, ctx) : Real(1L, bits);
      sum += t.contains("of") ? c * evaluate_recipe(t.at("of"), ctx) : c;
    }
    return sum;
  }
  if (op == "generating_series") {
    // sum a_n n^-s q^(n power), q the nome of k
    Modulus m = modulus_arg(args, ctx);
    Real q = nome(m.k * m.k, ctx);
    mpq_class power(args.contains("power") ? arg_string(args, "power") : "1");
    power.canonicalize();
    return generating_series(named_form(arg_string(args, "form")), args.at("s").get<int>(), pow(q, power), ctx);
  }
  if (op == "duke_3f2") {
    // pi sqrt(k) / (4 K(k)) 3F2(3/4, 3/4, 1; 5/4, 5/4; k^2)
    Modulus m = modulus_arg(args, ctx);
    Real K = ellK_from_complement(m.kprime, ctx);
    Real z = 1L - m.kprime * m.kprime;
    auto f = pFq({mpq_class(3, 4), mpq_class(3, 4), mpq_class(1)}, {mpq_class(5, 4), mpq_class(5, 4)}, z, ctx, false);
    return const_pi(bits) * sqrt(m.k) / (4L * K) * f.value;
  }
  if (op == "weight9_theta_series" || op == "weight9_modulus_form") {
    Real q = parse_number(arg_string(args, "q"), bits, ctx);
    const long N = args.value("N", 400L);
    Weight9Check c = weight9_ktheta_check(q, N, ctx);
    return op == "weight9_theta_series" ? c.series_value : c.theta_value;
  }
  if (op == "g2_combination") return g2_combination_check(ctx).rhs;
  if (op == "g2_alternating") return g2_alternating_check(args.at("y").get<long>(), ctx).rhs;
  throw domain_error("unknown numeric op '" + op + "'");
}

QSeries expand_recipe(const json& recipe, long N) {
  const std::string op = recipe.at("op").get<std::string>();
  const json args = recipe.value("args", json::object());
  if (op == "eta") return eta_combination_expand(parse_eta_combination(arg_string(args, "spec")), N);
  if (op == "form") return eta_combination_expand(named_form(arg_string(args, "name")).source, N);
  if (op == "theta") return theta_expand(parse_binary_form(arg_string(args, "spec")), N);
  if (op == "jacobi_eta3") return jacobi_eta3_series(N);
  if (op == "twist_negate") return twist_negate(expand_recipe(args.at("of"), N));
  if (op == "product") {
    ProductSpec spec;
    spec.lead = mpq_class(args.contains("lead") ? arg_string(args, "lead") : "0");
    spec.lead.canonicalize();
    for (const auto& f : args.at("factors")) {
      spec.factors.push_back({f.at("m").get<int>(), f.value("alternating", false), f.at("exponent").get<int>()});
    }
    return product_expand(spec, N);
  }
  throw domain_error("unknown series op '" + op + "'");
}

// ---------------------------------------------------------------- reports

json to_json(const VerificationReport& r) {
  json j;
  j["id"] = r.id;
  j["status"] = r.status;
  j["target"] = r.target;
  j["digits_achieved"] = r.digits_achieved ? json(*r.digits_achieved) : json();
  j["first_mismatch"] = r.first_mismatch ? json(*r.first_mismatch) : json();
  j["lhs_value"] = r.lhs_value;
  j["rhs_value"] = r.rhs_value;
  j["unverified_tail_digits"] = 10;
  j["detail"] = r.detail;
  j["wall_time"] = r.wall_time;
  return j;
}

VerificationReport report_from_json(const json& j) {
  VerificationReport r;
  r.id = j.at("id").get<std::string>();
  r.status = j.at("status").get<std::string>();
  r.target = j.value("target", 0);
  if (j.contains("digits_achieved") && !j["digits_achieved"].is_null()) r.digits_achieved = j["digits_achieved"].get<int>();
  if (j.contains("first_mismatch") && !j["first_mismatch"].is_null()) r.first_mismatch = j["first_mismatch"].get<std::string>();
  r.lhs_value = j.value("lhs_value", "");
  r.rhs_value = j.value("rhs_value", "");
  r.detail = j.value("detail", "");
  r.wall_time = j.value("wall_time", 0.0);
  return r;
}

namespace {

std::string shown(const Real& v, int verified) {
  return v.to_string(std::clamp(verified, 1, v.digits()) + 10);
}

std::string series_head(const QSeries& a, int count) {
  std::string out = "q^" + a.lead.get_str() + " * (";
  for (int i = 0; i < count && i < static_cast<int>(a.coeffs.size()); ++i) {
    out += (i ? ", " : "") + a.coeffs[i].get_str();
  }
  return out + ", ...)";
}

void run_numeric(const IdentityRecord& rec, const PrecisionContext& ctx, VerificationReport& rep) {
  const int target = ctx.target_digits();
  if (rec.method == "numeric-compare") {
    Real l = evaluate_recipe(rec.lhs, ctx), r = evaluate_recipe(rec.rhs, ctx);
    const int d = std::min(digits_agreement(l, r), ctx.working_digits());
    rep.digits_achieved = d;
    rep.lhs_value = shown(l, d);
    rep.rhs_value = shown(r, d);
    rep.status = d >= target ? "pass" : "fail";
    return;
  }
  if (rec.method == "rational-ratio") {
    Real l = evaluate_recipe(rec.lhs, ctx), r = evaluate_recipe(rec.rhs, ctx);
    const long k = rec.extra.value("pi_power", 0L);
    Real ratio = l / r / pow(const_pi(ctx.bits()), k);
    mpq_class expected(rec.extra.at("expected").get<std::string>());
    expected.canonicalize();
    const mpz_class max_den(rec.extra.value("max_denominator", 1000L));
    auto found = to_rational(ratio, max_den, target - 5);
    const int d = std::min(digits_agreement(ratio, Real(expected, ctx.bits())), ctx.working_digits());
    rep.digits_achieved = d;
    rep.lhs_value = shown(l, d);
    rep.rhs_value = shown(r, d);
    std::string ratio_text = found ? found->get_str() : "none";
    rep.detail = "ratio/pi^" + std::to_string(k) + " recovered as " + ratio_text + ", expected " + expected.get_str();
    rep.status = (found && *found == expected && d >= target) ? "pass" : "fail";
    return;
  }
  if (rec.method == "monotone-limit") {
    Real limit = evaluate_recipe(rec.rhs, ctx);
    const json& seq = rec.extra.at("sequence");
    const std::string arg = seq.at("arg").get<std::string>();
    std::vector<Real> gaps;
    Real last(ctx.bits());
    for (const auto& v : seq.at("values")) {
      json recipe = rec.lhs;
      recipe["args"][arg] = v;
      last = evaluate_recipe(recipe, ctx);
      gaps.push_back(abs(last - limit));
      rep.detail += (rep.detail.empty() ? "gaps: " : ", ") + gaps.back().to_string(3);
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < gaps.size(); ++i) decreasing = decreasing && gaps[i] < gaps[i - 1];
    const int d = digits_agreement(last, limit);
    rep.digits_achieved = d;
    rep.lhs_value = shown(last, d);
    rep.rhs_value = shown(limit, d);
    rep.status = decreasing ? "pass" : "fail";
    return;
  }
  throw domain_error("unknown method '" + rec.method + "'");
}

void run_exact(const IdentityRecord& rec, long N, VerificationReport& rep) {
  if (rec.method == "exact-series") {
    QSeries a = expand_recipe(rec.lhs, N), b = expand_recipe(rec.rhs, N);
    SeriesComparison c = series_equal(a, b, N);
    rep.lhs_value = series_head(a, 8);
    rep.rhs_value = series_head(b, 8);
    if (c.first_mismatch) rep.first_mismatch = c.first_mismatch->get_str();
    rep.status = c.equal ? "pass" : "fail";
    return;
  }
  // multiplicative
  QSeries a = expand_recipe(rec.lhs, N);
  MultiplicativityResult m = multiplicativity_check(a, N);
  rep.lhs_value = series_head(a, 8);
  if (m.first_violation) {
    rep.first_mismatch = std::to_string(m.first_violation->first) + "," + std::to_string(m.first_violation->second);
  }
  rep.status = m.multiplicative ? "pass" : "fail";
}

}  // namespace

VerificationReport verify(const IdentityRecord& rec, const RunOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.id = rec.id;
  const bool exact = rec.method == "exact-series" || rec.method == "multiplicative";
  rep.target = exact ? rec.target : options.digits.value_or(rec.target);
  PrecisionContext ctx(std::max(rep.target, 1), options.guard, options.threads);
  for (int attempt = 0; attempt < 2; ++attempt) {
    VerificationReport r = rep;
    try {
      if (exact) run_exact(rec, rec.target, r);
      else run_numeric(rec, ctx, r);
      rep = std::move(r);
      if (rep.status == "pass" || exact || attempt == 1) break;
      // below target: one retry with more guard digits
      ctx = ctx.escalated();
    } catch (const shortfall_error& e) {
      rep = r;
      rep.status = "shortfall";
      rep.digits_achieved = e.achieved_digits();
      rep.lhs_value = e.best_value();
      rep.detail = e.what();
      ctx = ctx.escalated();
    } catch (const std::exception& e) {
      rep = r;
      rep.status = "fail";
      rep.detail = e.what();
      break;
    }
  }
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

RunSummary run_all(const Registry& registry, std::string_view pattern, const RunOptions& options) {
  const auto selected = registry.matching(pattern);
  RunSummary out;
  out.reports.resize(selected.size());
  RunOptions per_record = options;
  per_record.threads = 1;
  parallel_for(selected.size(), options.threads, [&](std::size_t i) { out.reports[i] = verify(*selected[i], per_record); });
  for (const auto& r : out.reports) {
    if (r.status == "pass") ++out.passed;
    else if (r.status == "shortfall") ++out.shortfall;
    else ++out.failed;
  }
  return out;
}

}  // namespace elv
