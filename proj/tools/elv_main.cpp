// elv: verify, rediscover and evaluate the elliptic-moment / L-value identities.

#include "elv/closed_form.hpp"
#include "elv/lattice_sums.hpp"
#include "elv/lseries.hpp"
#include "elv/quadrature.hpp"
#include "elv/qseries.hpp"
#include "elv/registry.hpp"
#include "elv/relations.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

using namespace elv;

namespace {

enum Exit { ok = 0, verification_failed = 1, usage = 2, shortfall = 3 };

// "moment:ID", "lvalue:FORM:S", "weight3:R:S", "weight9"
std::function<Real(const PrecisionContext&)> parse_recipe(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto colon = text.find(':', start);
    parts.push_back(text.substr(start, colon - start));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  const std::string& kind = parts[0];
  if (kind == "moment" && parts.size() == 2) {
    moment_integrand(parts[1]);  // rejects unknown ids up front
    return [id = parts[1]](const PrecisionContext& c) { return moment(id, c); };
  }
  if (kind == "lvalue" && parts.size() == 3) {
    const ModularFormSpec& f = named_form(parts[1]);
    const int s = std::stoi(parts[2]);
    return [&f, s](const PrecisionContext& c) { return lvalue(f, s, c); };
  }
  if (kind == "weight3" && parts.size() == 3) {
    const int r = std::stoi(parts[1]), s = std::stoi(parts[2]);
    return [r, s](const PrecisionContext& c) { return lvalue_weight3(r, s, c); };
  }
  if (kind == "weight9" && parts.size() == 1) return [](const PrecisionContext& c) { return lvalue_weight9_s8(c); };
  throw parse_error("recipe '" + text + "': expected moment:ID, lvalue:FORM:S, weight3:R:S or weight9");
}

void print_value(const std::string& label, const Real& v, int digits) {
  std::cout << label << " = " << v.to_string(digits) << "\n";
}

int run_verify(const std::string& id, std::optional<int> digits, const std::string& json_path, unsigned threads) {
  const Registry& reg = default_registry();
  const std::string pattern = id.empty() ? "*" : id;
  if (reg.matching(pattern).empty()) {
    std::cerr << "elv: no registry record matches '" << pattern << "'\n";
    return usage;
  }
  RunOptions opt;
  opt.digits = digits;
  opt.threads = threads;
  const RunSummary summary = run_all(reg, pattern, opt);

  json out = json::array();
  for (const auto& r : summary.reports) out.push_back(to_json(r));
  const bool json_to_stdout = json_path == "-";
  if (!json_path.empty()) {
    if (json_to_stdout) {
      std::cout << out.dump(1) << "\n";
    } else {
      std::ofstream f(json_path);
      if (!f) throw std::runtime_error("cannot write " + json_path);
      f << out.dump(1) << "\n";
    }
  }
  std::ostream& log = json_to_stdout ? std::cerr : std::cout;
  for (const auto& r : summary.reports) {
    log << r.status << "  " << r.id;
    if (r.digits_achieved) log << "  " << *r.digits_achieved << "/" << r.target << " digits";
    if (r.first_mismatch) log << "  mismatch at " << *r.first_mismatch;
    if (r.status != "pass" && !r.detail.empty()) log << "  (" << r.detail << ")";
    log << "\n";
  }
  log << summary.passed << " passed, " << summary.failed << " failed, " << summary.shortfall << " shortfall\n";
  if (summary.failed) return verification_failed;
  if (summary.shortfall) return shortfall;
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Arbitrary-precision checks of elliptic-integral moments, L-values and lattice sums"};
  app.require_subcommand(1);
  unsigned threads = 1;
  app.add_option("--threads", threads, "worker threads for verify")->check(CLI::Range(1u, 256u));

  std::optional<int> digits;
  auto add_digits = [&](CLI::App* sub) { sub->add_option("--digits", digits, "target decimal digits")->check(CLI::Range(5, 2000)); };

  std::string verify_id, json_path;
  auto* verify = app.add_subcommand("verify", "run registry records (glob over ids)");
  verify->add_option("--id", verify_id, "record id or pattern; all records if omitted");
  add_digits(verify);
  verify->add_option("--json", json_path, "write reports as JSON to PATH, or - for stdout");

  std::string recipe, basis;
  auto* discover = app.add_subcommand("discover", "find a Gamma-product closed form by PSLQ");
  discover->add_option("--recipe", recipe, "moment:ID | lvalue:FORM:S | weight3:R:S | weight9")->required();
  discover->add_option("--basis", basis, "constant basis")->required();
  add_digits(discover);

  std::string spec_text, order = "rectangle";
  auto* lsum = app.add_subcommand("lsum", "evaluate a two-dimensional lattice sum");
  lsum->add_option("--spec", spec_text, "lattice sum spec")->required();
  lsum->add_option("--order", order, "summation order")->check(CLI::IsMember({"rectangle", "ellipse"}));
  add_digits(lsum);

  std::string form_name;
  int s = 0;
  auto* lval = app.add_subcommand("lvalue", "critical L-value of a named form");
  lval->add_option("--form", form_name, "form name")->required();
  lval->add_option("--s", s, "critical point")->required();
  add_digits(lval);

  std::string moment_id;
  auto* mom = app.add_subcommand("moment", "elliptic-integral moment by tanh-sinh quadrature");
  mom->add_option("--id", moment_id, "moment id")->required();
  add_digits(mom);

  std::string eta_text;
  long order_n = 0;
  auto* expand = app.add_subcommand("expand", "q-expansion coefficients of an eta quotient");
  expand->add_option("--eta", eta_text, "eta quotient, e.g. eta(1)^4*eta(2)^2*eta(4)^4")->required();
  expand->add_option("--order", order_n, "last coefficient index")->required()->check(CLI::Range(1L, 1000000L));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return usage;
  }

  try {
    if (*verify) return run_verify(verify_id, digits, json_path, threads);

    const PrecisionContext ctx(digits.value_or(40));
    if (*discover) {
      const auto value = parse_recipe(recipe);
      const auto found = discover_gamma_form(value, named_basis(basis), ctx.with_target(digits.value_or(60)));
      if (!found) {
        std::cout << "no relation found\n";
        return verification_failed;
      }
      std::cout << format_closed_form(found->form) << "\n";
      std::cout << "verified to " << found->verified_digits << " digits\n";
      return ok;
    }
    if (*lsum) {
      const LatticeSumSpec spec = parse_lattice_spec(spec_text);
      const int target = digits.value_or(12);
      const PrecisionContext c = ctx.with_target(target);
      const LatticeValue v = order == "ellipse" ? ellipse_sum(spec, c, target) : accelerated_sum(spec, c, target);
      print_value("sum", v.value, v.achieved_digits);
      std::cout << v.achieved_digits << " digits, " << v.rows << " rows, " << v.method << "\n";
      return ok;
    }
    if (*lval) {
      print_value("L(" + form_name + "," + std::to_string(s) + ")", lvalue(named_form(form_name), s, ctx), ctx.target_digits());
      return ok;
    }
    if (*mom) {
      print_value(moment_id, moment(moment_id, ctx), ctx.target_digits());
      return ok;
    }
    if (*expand) {
      const QSeries q = eta_quotient_expand(parse_eta_quotient(eta_text), order_n);
      if (q.lead.get_den() == 1) {
        for (long n = 1; n <= order_n; ++n) std::cout << (n > 1 ? " " : "") << q.a(n);
        std::cout << "\n";
      } else {
        for (std::size_t i = 0; i < q.order(); ++i) {
          if (q.coeffs[i] != 0) std::cout << "q^" << mpq_class(q.lead + static_cast<long>(i)) << "  " << q.coeffs[i] << "\n";
        }
      }
      return ok;
    }
  } catch (const shortfall_error& e) {
    std::cerr << "elv: " << e.what() << "\nbest value " << e.best_value() << " (" << e.achieved_digits() << " digits)\n";
    return shortfall;
  } catch (const parse_error& e) {
    std::cerr << "elv: " << e.what() << "\n";
    return usage;
  } catch (const domain_error& e) {
    std::cerr << "elv: " << e.what() << "\n";
    return usage;
  } catch (const std::exception& e) {
    std::cerr << "elv: " << e.what() << "\n";
    return verification_failed;
  }
  return ok;
}
