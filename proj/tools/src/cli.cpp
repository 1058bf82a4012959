#include "cli.hpp"

#include "fan_io.hpp"

#include "stackheight/counting.hpp"
#include "stackheight/predict.hpp"
#include "stackheight/primes.hpp"
#include "stackheight/zeta_local.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <optional>

namespace stackheight::cli {

using nlohmann::json;

namespace {

// Exit code carried by failures that should not print a usage hint.
struct Failure {
  int code;
  std::string message;
};

json rationals_json(const std::vector<Rational>& v) {
  json out = json::array();
  for (const auto& q : v) out.push_back(rational_json(q));
  return out;
}

json report_json(const StackyFan& spec, const ValidationReport& report) {
  json checks = json::array();
  for (const auto& d : report.diagnostics) {
    json c = {{"check", d.check}, {"passed", d.passed}, {"detail", d.detail}};
    if (!d.witness.empty()) c["witness"] = rationals_json(d.witness);
    checks.push_back(c);
  }
  return {{"name", spec.name}, {"valid", report.ok()}, {"checks", checks}};
}

StackyFan read_spec(const std::string& path) {
  try {
    return load_fan(path);
  } catch (const FanFormatError& e) {
    throw Failure{2, path + ": " + e.what()};
  } catch (const std::runtime_error& e) {
    throw Failure{2, e.what()};
  }
}

Fan read_fan(const std::string& path) {
  const StackyFan spec = read_spec(path);
  try {
    return Fan(spec);
  } catch (const InvalidFan& e) {
    throw Failure{1, "invalid fan " + path + "\n" + report_json(spec, e.report()).dump(2)};
  }
}

RaisedVector raised_or_default(const Fan& fan, const std::string& text) {
  if (text.empty()) return anticanonical(fan);
  try {
    return parse_raised(fan, text);
  } catch (const FanFormatError& e) {
    throw Failure{2, std::string("--s: ") + e.what()};
  }
}

Rational parse_bound(const std::string& text) {
  try {
    const Rational b = parse_rational(text);
    if (b <= 0) throw std::invalid_argument("bound must be positive: " + text);
    return b;
  } catch (const std::invalid_argument& e) {
    throw Failure{2, e.what()};
  }
}

std::vector<Rational> parse_bounds(const std::string& text) {
  std::vector<Rational> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    out.push_back(parse_bound(text.substr(start, comma - start)));
    start = comma + 1;
  }
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i] <= out[i - 1]) throw Failure{2, "--bounds must be strictly increasing"};
  return out;
}

json bound_json(const Rational& b) {
  if (b.get_den() == 1 && b.get_num().fits_slong_p()) return b.get_num().get_si();
  return rational_json(b);
}

std::string bound_csv(const Rational& b) {
  return b.get_den() == 1 ? b.get_num().get_str() : format_number(b.get_d());
}

CountReport do_count(const Fan& fan, const RaisedVector& s, const Rational& bound, unsigned threads, bool naive) {
  if (naive) return count_points_naive(fan, s, bound);
  CountOptions options;
  options.threads = threads;
  return count_points(fan, s, bound, options);
}

json count_json(const Fan& fan, const CountReport& r, bool naive) {
  return {{"fan", fan.spec().name},
          {"method", naive ? "naive" : "skeleton"},
          {"B", bound_json(r.bound)},
          {"N_H", r.points},
          {"unit_multiplicity", r.unit_multiplicity},
          {"skeletons", r.skeletons},
          {"skeletons_visited", r.skeletons_visited},
          {"sector_tally", r.sector_tally},
          {"exact_comparisons", r.exact_comparisons},
          {"max_prime", r.max_prime},
          {"threads", r.threads},
          {"seconds", number(r.seconds)}};
}

std::ofstream open_csv(const std::string& path, const std::string& header) {
  const bool fresh = !std::ifstream(path).good();
  std::ofstream f(path, std::ios::app);
  if (!f) throw Failure{2, "cannot write '" + path + "'"};
  if (fresh) f << header << '\n';
  return f;
}

json sectors_json(const Fan& fan) {
  const auto k = anticanonical(fan);
  const auto names = raised_variable_names(fan);
  json sectors = json::array();
  for (std::size_t i = 0; i < fan.sectors().size(); ++i) {
    const Sector& sec = fan.sectors()[i];
    json coords = json::object();
    for (std::size_t r = 0; r < fan.num_rays(); ++r)
      if (sec.coords[r] != 0) coords[fan.spec().rays[r].id] = rational_json(sec.coords[r]);
    sectors.push_back({{"index", i},
                       {"variable", sec.untwisted ? json(nullptr) : json(names[fan.num_rays() + i - 1])},
                       {"y", sec.y},
                       {"g", sec.g},
                       {"age", rational_json(sec.age)},
                       {"untwisted", sec.untwisted},
                       {"coords", coords}});
  }
  return {{"name", fan.spec().name},
          {"box_size", fan.sectors().size()},
          {"box_rig_size", fan.box_rig_size()},
          {"sectors", sectors},
          {"anticanonical", rationals_json(k.entries())},
          {"variables", names}};
}

json predict_json(const Fan& fan, const PredictedAsymptotics& p) {
  return {{"fan", fan.spec().name},
          {"b", p.b},
          {"C", number(p.C)},
          {"X", {{"exact", rational_json(p.x_exact)}, {"value", number(p.x_value)}}},
          {"gamma", {{"value", number(p.gamma)}, {"tail", number(p.gamma_tail)}, {"prime_bound", p.prime_bound}}},
          {"h_inf", number(p.h_inf)},
          {"gd_order", p.gd_order},
          {"sha_order", p.sha_order},
          {"b_group_order", p.b_group_order},
          {"unit_multiplicity", p.unit_multiplicity},
          {"calibration", number(p.calibration)},
          {"normalization", p.normalization_tag},
          {"note", p.note}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rational points of bounded height on split toric stacks over Q", "stackheight"};
  app.require_subcommand(1);

  std::string fan_file, s_text, out_file, bound_text, bounds_text;
  unsigned threads = 1;
  std::uint64_t prime = 0, prime_bound = 1'000'000;
  std::int64_t radius = -1;
  bool naive = false, oracle = false;

  auto* fan_cmd = app.add_subcommand("fan", "Inspect a fan file");
  fan_cmd->require_subcommand(1);
  auto* validate_cmd = fan_cmd->add_subcommand("validate", "Run every fan check and print the report");
  validate_cmd->add_option("file", fan_file, "Fan JSON file")->required();
  auto* sectors_cmd = fan_cmd->add_subcommand("sectors", "List twisted sectors, ages and -K_X");
  sectors_cmd->add_option("file", fan_file, "Fan JSON file")->required();
  auto* normalize_cmd = fan_cmd->add_subcommand("normalize", "Print the fan in canonical form");
  normalize_cmd->add_option("file", fan_file, "Fan JSON file")->required();

  const auto add_fan = [&](CLI::App* cmd) { cmd->add_option("--fan", fan_file, "Fan JSON file")->required(); };
  const auto add_s = [&](CLI::App* cmd) {
    cmd->add_option("--s", s_text, "Raised vector as a JSON array (default -K_X)");
  };

  auto* count_cmd = app.add_subcommand("count", "Count points of height at most B");
  add_fan(count_cmd);
  count_cmd->add_option("--bound", bound_text, "Height bound B")->required();
  add_s(count_cmd);
  count_cmd->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 1024u));
  count_cmd->add_option("--out", out_file, "Append B,N to this CSV file");
  count_cmd->add_flag("--naive", naive, "Use the brute-force enumeration");

  auto* sweep_cmd = app.add_subcommand("count-sweep", "Count at several bounds, CSV output");
  add_fan(sweep_cmd);
  sweep_cmd->add_option("--bounds", bounds_text, "Comma-separated increasing bounds")->required();
  add_s(sweep_cmd);
  sweep_cmd->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 1024u));
  sweep_cmd->add_option("--out", out_file, "Write the CSV here instead of stdout");

  auto* zeta_cmd = app.add_subcommand("zeta", "Height zeta function data");
  zeta_cmd->require_subcommand(1);
  auto* local_cmd = zeta_cmd->add_subcommand("local", "Local transform at the trivial character");
  add_fan(local_cmd);
  local_cmd->add_option("--prime", prime, "Prime p")->required();
  add_s(local_cmd);
  local_cmd->add_option("--radius", radius, "Cross-check by direct summation over ||y|| <= radius");
  local_cmd->add_flag("--oracle", oracle, "Cross-check with a radius chosen for a 1e-10 tail");

  auto* predict_cmd = app.add_subcommand("predict", "Predicted b and C at -K_X");
  add_fan(predict_cmd);
  predict_cmd->add_option("--prime-bound", prime_bound, "Truncation of the Euler product");

  auto* compare_cmd = app.add_subcommand("compare", "Counts against the prediction, CSV output");
  add_fan(compare_cmd);
  compare_cmd->add_option("--bounds", bounds_text, "Comma-separated increasing bounds")->required();
  compare_cmd->add_option("--prime-bound", prime_bound, "Truncation of the Euler product");
  compare_cmd->add_option("--threads", threads, "Counting threads")->check(CLI::Range(1u, 1024u));
  compare_cmd->add_option("--out", out_file, "Write the CSV here instead of stdout");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*validate_cmd) {
      const StackyFan spec = read_spec(fan_file);
      const ValidationReport report = validate(spec);
      out << report_json(spec, report).dump(2) << '\n';
      return report.ok() ? 0 : 1;
    }
    if (*normalize_cmd) {
      const StackyFan spec = read_spec(fan_file);
      const ValidationReport report = validate(spec);
      if (!report.ok()) throw Failure{1, "invalid fan " + fan_file + "\n" + report_json(spec, report).dump(2)};
      out << fan_to_json(normalize(spec)).dump(2) << '\n';
      return 0;
    }
    if (*sectors_cmd) {
      out << sectors_json(read_fan(fan_file)).dump(2) << '\n';
      return 0;
    }
    if (*count_cmd) {
      const Fan fan = read_fan(fan_file);
      const RaisedVector s = raised_or_default(fan, s_text);
      const Rational bound = parse_bound(bound_text);
      const CountReport r = do_count(fan, s, bound, threads, naive);
      out << count_json(fan, r, naive).dump(2) << '\n';
      if (!out_file.empty()) open_csv(out_file, "B,N") << bound_csv(bound) << ',' << r.points << '\n';
      return 0;
    }
    if (*sweep_cmd) {
      const Fan fan = read_fan(fan_file);
      const RaisedVector s = raised_or_default(fan, s_text);
      const auto bounds = parse_bounds(bounds_text);
      std::ofstream file;
      if (!out_file.empty()) {
        file.open(out_file);
        if (!file) throw Failure{2, "cannot write '" + out_file + "'"};
      }
      std::ostream& csv = out_file.empty() ? out : file;
      csv << "B,N\n";
      for (const auto& b : bounds) csv << bound_csv(b) << ',' << do_count(fan, s, b, threads, false).points << '\n';
      return 0;
    }
    if (*local_cmd) {
      const Fan fan = read_fan(fan_file);
      const RaisedVector s = raised_or_default(fan, s_text);
      if (prime < 2 || primes_up_to(prime).back() != prime) throw Failure{2, "--prime must be a prime"};
      const double value = local_transform(fan, s, prime);
      json doc = {{"fan", fan.spec().name},
                  {"p", prime},
                  {"s", rationals_json(s.entries())},
                  {"variables", raised_variable_names(fan)},
                  {"Q_Sigma", q_sigma_poly(fan).to_string(raised_variable_names(fan))},
                  {"value", number(value)}};
      if (oracle && radius < 0) radius = oracle_radius_for(fan, s, prime, 1e-10);
      if (radius >= 0) {
        const OracleSum o = local_transform_oracle(fan, s, prime, radius);
        doc["oracle"] = {{"radius", o.radius},
                         {"partial", number(o.partial)},
                         {"tail", number(o.tail)},
                         {"terms", o.terms},
                         {"agrees", std::fabs(o.partial - value) <= o.tail + 1e-12 * value}};
      }
      out << doc.dump(2) << '\n';
      return 0;
    }
    if (*predict_cmd) {
      const Fan fan = read_fan(fan_file);
      out << predict_json(fan, predict(fan, prime_bound)).dump(2) << '\n';
      return 0;
    }
    if (*compare_cmd) {
      const Fan fan = read_fan(fan_file);
      const RaisedVector k = anticanonical(fan);
      const auto bounds = parse_bounds(bounds_text);
      const PredictedAsymptotics p = predict(fan, prime_bound);
      std::vector<std::pair<double, double>> samples;
      std::vector<std::uint64_t> counts;
      for (const auto& b : bounds) {
        counts.push_back(do_count(fan, k, b, threads, false).points);
        samples.emplace_back(b.get_d(), static_cast<double>(counts.back()));
      }
      std::optional<FitResult> fitted;
      try {
        fitted = fit(samples, p.b);
      } catch (const std::invalid_argument& e) {
        err << "warning: " << e.what() << "; exponent_hat left empty\n";
      }
      std::ofstream file;
      if (!out_file.empty()) {
        file.open(out_file);
        if (!file) throw Failure{2, "cannot write '" + out_file + "'"};
      }
      std::ostream& csv = out_file.empty() ? out : file;
      csv << "B,N,predicted_C,predicted_b,C_hat,exponent_hat\n";
      for (std::size_t i = 0; i < bounds.size(); ++i) {
        const double B = samples[i].first;
        const double c_hat = B > 1 ? samples[i].second / (B * std::pow(std::log(B), p.b - 1)) : 0.0;
        csv << bound_csv(bounds[i]) << ',' << counts[i] << ',' << format_number(p.C) << ',' << p.b << ','
            << format_number(c_hat) << ',' << (fitted ? format_number(fitted->exponent_hat) : std::string()) << '\n';
      }
      return 0;
    }
  } catch (const Failure& f) {
    err << f.message << '\n';
    return f.code;
  } catch (const InvalidFan& e) {
    err << "invalid fan\n" << e.what() << '\n';
    return 1;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const OracleGuardError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace stackheight::cli
