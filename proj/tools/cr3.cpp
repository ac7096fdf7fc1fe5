#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cr3/audit.hpp"
#include "cr3/chains.hpp"
#include "cr3/curve_file.hpp"
#include "cr3/curves.hpp"
#include "cr3/error.hpp"
#include "cr3/expression.hpp"
#include "cr3/iso.hpp"
#include "cr3/knots.hpp"
#include "cr3/reconstruct.hpp"
#include "cr3/strain.hpp"

using json = nlohmann::ordered_json;
using namespace cr3;

namespace {

constexpr const char* kVersion = "1.0.0";

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json provenance(const std::string& command) {
  json j;
  j["tool"] = "cr3";
  j["version"] = kVersion;
  j["command"] = command;
  return j;
}

void emit(const json& j, const std::string& path) { write_text(path, j.dump(2) + "\n"); }

ConfigKind parse_kind(const std::string& s) {
  if (s == "first") return ConfigKind::First;
  if (s == "second") return ConfigKind::Second;
  fail(ErrorCode::InvalidArgument, "--kind must be 'first' or 'second'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(item);
  return out;
}

double parse_real(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    fail(ErrorCode::InvalidArgument, "not a number: '" + s + "'");
  }
  if (used != s.size()) fail(ErrorCode::InvalidArgument, "not a number: '" + s + "'");
  return v;
}

// a, bi, a+bi, a-bi, i, -i.
Complex parse_complex(std::string s) {
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  if (s.empty()) fail(ErrorCode::InvalidArgument, "empty complex number");
  if (s.back() != 'i') return parse_real(s);
  std::string body = s.substr(0, s.size() - 1);
  // Split at the last sign that is not an exponent sign or the leading sign.
  std::size_t cut = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      cut = k;
      break;
    }
  }
  auto imag_part = [](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_real(t);
  };
  if (cut == std::string::npos) return {0.0, imag_part(body)};
  return {parse_real(body.substr(0, cut)), imag_part(body.substr(cut))};
}

Eigen::Vector3d parse_triple(const std::string& s) {
  auto parts = split(s, ',');
  if (parts.size() != 3) fail(ErrorCode::InvalidArgument, "expected three comma-separated values: '" + s + "'");
  return {parse_real(parts[0]), parse_real(parts[1]), parse_real(parts[2])};
}

json stats_json(const std::vector<double>& v) {
  double lo = *std::min_element(v.begin(), v.end());
  double hi = *std::max_element(v.begin(), v.end());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  json j;
  j["mean"] = mean;
  j["min"] = lo;
  j["max"] = hi;
  j["spread"] = hi - lo;
  return j;
}

// construct ------------------------------------------------------------------

struct ConstructArgs {
  std::string kind, r, out = "-", model = "heisenberg";
  double rho = 0.0;
  std::size_t samples = 1024;
};

json forms_meta(const ConfigClosedForms& f, double period) {
  json m;
  m["kind"] = to_string(f.spec.kind);
  m["r"] = f.spec.r.str();
  m["rho"] = f.spec.rho;
  m["knot"] = f.knot.str();
  m["spin"] = f.spin.spin_str();
  m["anomaly"] = f.spin.anomaly_str();
  m["maslov"] = f.maslov;
  m["kappa"] = f.kappa;
  m["tau"] = f.tau;
  m["mu"] = f.norm.mu;
  m["c"] = f.norm.c;
  m["sigma"] = complex_json(f.norm.sigma);
  m["normalization_residual"] = f.norm.residual;
  m["omega_lift"] = f.omega_lift;
  m["period"] = period;
  return m;
}

int cmd_construct(const ConstructArgs& a) {
  IsoparametricSpec spec{parse_kind(a.kind), parse_ratio(a.r), a.rho};
  if (a.model != "heisenberg" && a.model != "lift")
    fail(ErrorCode::InvalidArgument, "--model must be 'heisenberg' or 'lift'");
  SymmetricConfiguration cfg(spec);
  CurveFile file;
  file.curve = a.model == "lift" ? cfg.sample_lift(a.samples) : cfg.sample_heisenberg(a.samples);
  file.meta = forms_meta(cfg.forms(), cfg.curve_period());
  save_curve(file, a.out);
  return 0;
}

// invariants -------------------------------------------------------------------

struct InvariantsArgs {
  std::string in, report = "-";
  std::size_t samples = 0;
};

int cmd_invariants(const InvariantsArgs& a) {
  CurveFile file = load_curve(a.in);
  const SampledCurve& c = file.curve;
  json r = provenance("invariants");
  r["input"] = a.in;
  r["tolerances"] = {{"transversality", 1e-10}, {"inflection", 1e-6}, {"natural", 1e-6},
                     {"winding", 0.01}, {"cube_root", 1e-7}};
  r["closed"] = c.periodic();
  r["orientation"] = orientation(c);
  auto infl = inflection_scan(c);
  if (!infl.empty()) {
    std::ostringstream os;
    os << "CR inflection points detected (" << infl.size() << " samples, first near s = " << infl.front() << ")";
    fail(ErrorCode::InflectionPresent, os.str());
  }
  r["inflection_samples"] = 0;
  WilczynskiData d = analyze_curve(c, a.samples);
  r["kappa"] = stats_json(d.kappa);
  r["tau"] = stats_json(d.tau);
  if (!c.periodic()) {
    r["note"] = "curve is not closed; only local invariants are reported";
    emit(r, a.report);
    return 0;
  }
  r["natural_period"] = d.curve.period();
  double strain = total_strain(c);
  r["total_strain"] = {{"value", strain}, {"natural_period_difference", strain - d.curve.period()}};
  Monodromy mono = monodromy(c);
  r["spin"] = mono.spin_denominator == 3 ? "1/3" : "1";
  r["anomaly"] = mono.anomaly_thirds == 0 ? "0" : (mono.anomaly_thirds == 1 ? "2pi/3" : "4pi/3");
  r["monodromy"] = complex_json(mono.epsilon);
  MaslovResult m = maslov_numeric(c);
  r["maslov"] = {{"numeric", m.index}, {"raw", m.raw}, {"residual", std::abs(m.raw - m.index)},
                 {"lift_periods", m.lift_periods}};
  if (file.meta.contains("kind") && file.meta.contains("r")) {
    ConfigKind kind = parse_kind(file.meta["kind"].get<std::string>());
    RationalRatio rr = parse_ratio(file.meta["r"].get<std::string>());
    r["maslov"]["closed_form"] = maslov_closed(kind, rr);
    r["knot"] = knot_type(kind, rr).str();
    SpinAnomaly sa = spin_anomaly(rr);
    r["closed_form"] = {{"spin", sa.spin_str()}, {"anomaly", sa.anomaly_str()}};
  }
  emit(r, a.report);
  return 0;
}

// link -----------------------------------------------------------------------

struct LinkArgs {
  std::string in, pushoff = "crnormal", report = "-";
  double epsilon = 0.0;
  std::size_t quadrature = 1024, samples = 0;
};

json linking_json(const LinkingResult& l) {
  return {{"raw", l.raw},           {"rounded", l.rounded},
          {"residual", l.residual}, {"valid", l.valid()},
          {"epsilon", l.epsilon},   {"quadrature_points", l.quadrature_points},
          {"min_distance", l.min_distance}};
}

int cmd_link(const LinkArgs& a) {
  CurveFile file = load_curve(a.in);
  if (a.pushoff != "contact" && a.pushoff != "crnormal")
    fail(ErrorCode::InvalidArgument, "--pushoff must be 'contact' or 'crnormal'");
  LinkingEstimate e;
  if (a.pushoff == "contact") {
    e = bennequin_sweep(file.curve, a.epsilon, a.quadrature);
  } else {
    WilczynskiData d = analyze_curve(file.curve, a.samples);
    e = self_linking_sweep(d, a.epsilon, a.quadrature);
  }
  json r = provenance("link");
  r["input"] = a.in;
  r["pushoff"] = a.pushoff;
  r["workers"] = worker_count();
  r["at_epsilon"] = linking_json(e.at_epsilon);
  r["at_half_epsilon"] = linking_json(e.at_half);
  r["stable"] = e.stable();
  r["rounded"] = e.at_epsilon.rounded;
  emit(r, a.report);
  if (!e.stable()) {
    std::cerr << "error: Unstable: rounded linking number changes under epsilon halving ("
              << e.at_epsilon.raw << " vs " << e.at_half.raw << ")\n";
    return 6;
  }
  return 0;
}

// critical -------------------------------------------------------------------

struct CriticalArgs {
  long p = 0, q = 0;
  std::string report = "-", out;
  std::size_t samples = 1024;
};

int cmd_critical(const CriticalArgs& a) {
  CriticalConfig c = critical_config(a.p, a.q);
  json r = provenance("critical");
  r["p"] = a.p;
  r["q"] = a.q;
  r["r"] = c.r.str();
  r["rho"] = c.root.rho;
  r["kappa"] = c.root.kappa;
  r["tau"] = c.root.tau;
  r["residual"] = c.root.residual;
  r["lift_residual"] = c.lift_residual;
  r["knot"] = c.forms.knot.str();
  r["period"] = curve_minimal_period(c.forms);
  json cmp;
  cmp["printed_rho2"] = c.root.printed_rho2;
  cmp["rho2"] = c.root.rho * c.root.rho;
  cmp["f"] = c.root.f;
  cmp["f3_in_claimed_range"] = c.root.f3_in_claimed_range;
  cmp["quartic_at_root"] = c.root.quartic_at_root;
  cmp["quartic_roots_rho2"] = c.root.quartic_roots_rho2;
  r["comparison"] = cmp;
  emit(r, a.report);
  if (!a.out.empty()) {
    SymmetricConfiguration cfg({ConfigKind::Second, c.r, c.root.rho});
    CurveFile file;
    file.curve = cfg.sample_heisenberg(a.samples);
    file.meta = forms_meta(cfg.forms(), cfg.curve_period());
    save_curve(file, a.out);
  }
  return 0;
}

// scan -----------------------------------------------------------------------

struct ScanArgs {
  std::string kind, r_list, rho_grid, out = "-";
  std::size_t samples = 1024, quadrature = 1024;
  bool no_linking = false;
};

int cmd_scan(const ScanArgs& a) {
  ConfigKind kind = parse_kind(a.kind);
  std::vector<RationalRatio> rs;
  for (const auto& s : split(a.r_list, ',')) rs.push_back(parse_ratio(s));
  auto g = split(a.rho_grid, ':');
  if (g.size() != 3) fail(ErrorCode::InvalidArgument, "--rho-grid must be lo:hi:n");
  double lo = parse_real(g[0]), hi = parse_real(g[1]);
  long n = std::lround(parse_real(g[2]));
  if (n < 1) fail(ErrorCode::InvalidArgument, "--rho-grid needs n >= 1");

  std::ostringstream csv;
  csv << "kind,r,rho,kappa,tau,p,q,spin,maslov,omega,strain,beta_raw,beta,sl_raw,sl\n";
  for (const auto& r : rs) {
    for (long k = 0; k < n; ++k) {
      double rho = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
      csv << to_string(kind) << "," << r.str() << "," << format_double(rho);
      try {
        SymmetricConfiguration cfg({kind, r, rho});
        const auto& f = cfg.forms();
        SampledCurve hc = cfg.sample_heisenberg(a.samples);
        csv << "," << format_double(f.kappa) << "," << format_double(f.tau) << "," << f.knot.p << ","
            << f.knot.q << "," << f.spin.spin_str();
        std::string maslov, strain, beta_raw, beta, sl_raw, sl;
        try {
          maslov = std::to_string(maslov_numeric(cfg.sample_lift(a.samples)).index);
        } catch (const Error&) {
        }
        try {
          strain = format_double(total_strain(hc));
        } catch (const Error&) {
        }
        if (!a.no_linking) {
          try {
            LinkingEstimate b = bennequin_sweep(hc, 0.0, a.quadrature);
            beta_raw = format_double(b.at_epsilon.raw);
            if (b.stable() && b.at_epsilon.valid()) beta = std::to_string(b.at_epsilon.rounded);
          } catch (const Error&) {
          }
          try {
            LinkingEstimate s = self_linking_sweep(analyze_curve(hc), 0.0, a.quadrature);
            sl_raw = format_double(s.at_epsilon.raw);
            if (s.stable() && s.at_epsilon.valid()) sl = std::to_string(s.at_epsilon.rounded);
          } catch (const Error&) {
          }
        }
        csv << "," << maslov << "," << format_double(f.omega_lift) << "," << strain << "," << beta_raw
            << "," << beta << "," << sl_raw << "," << sl << "\n";
      } catch (const Error& e) {
        if (e.code() != ErrorCode::DomainError && e.code() != ErrorCode::NoConvergence) throw;
        csv << ",,,,,,,,,,,,\n";
      }
    }
  }
  write_text(a.out, csv.str());
  return 0;
}

// reconstruct ----------------------------------------------------------------

struct ReconstructArgs {
  std::string kappa, tau, out = "-";
  double length = 0.0, step = 0.0;
  bool closed = false;
};

// Either a path to "s,value" rows or an expression in s.
std::function<double(double)> profile_function(const std::string& arg) {
  if (std::filesystem::is_regular_file(arg)) {
    std::istringstream is(read_text(arg));
    std::vector<double> s, v;
    std::string line;
    while (std::getline(is, line)) {
      if (line.empty() || line[0] == '#') continue;
      auto parts = split(line, ',');
      if (parts.size() != 2) fail(ErrorCode::Format, "profile rows must be 's,value': '" + line + "'");
      try {
        s.push_back(parse_real(parts[0]));
        v.push_back(parse_real(parts[1]));
      } catch (const Error&) {
        if (s.empty()) continue;  // header row
        throw;
      }
    }
    auto p = InvariantProfile::sampled(s, v, v);
    return p.kappa;
  }
  try {
    Expression e = Expression::parse(arg);
    return [e](double s) { return e(s); };
  } catch (const Error& err) {
    fail(ErrorCode::InvalidArgument, err.what());
  }
}

int cmd_reconstruct(const ReconstructArgs& a) {
  InvariantProfile prof{profile_function(a.kappa), profile_function(a.tau)};
  Reconstruction rec = reconstruct(prof, PseudoMatrix::Identity(), 0.0, a.length, a.step);
  CurveFile file;
  file.curve = a.closed ? rec.closed_curve() : rec.curve();
  file.meta["kappa"] = a.kappa;
  file.meta["tau"] = a.tau;
  file.meta["length"] = a.length;
  file.meta["steps"] = rec.params.size() - 1;
  file.meta["max_group_defect"] = rec.max_group_defect;
  file.meta["max_step_error"] = rec.max_step_error;
  file.meta["initial_frame"] = "identity";
  save_curve(file, a.out);
  return 0;
}

// chain ----------------------------------------------------------------------

struct ChainArgs {
  std::string normal, through, dir, out = "-";
  std::size_t samples = 256;
};

int cmd_chain(const ChainArgs& a) {
  CurveFile file;
  if (!a.normal.empty()) {
    if (!a.through.empty() || !a.dir.empty())
      fail(ErrorCode::InvalidArgument, "use either --normal or --through with --dir");
    auto parts = split(a.normal, ',');
    if (parts.size() != 3) fail(ErrorCode::InvalidArgument, "--normal needs three complex entries");
    ChainSpec spec;
    spec.normal << parse_complex(parts[0]), parse_complex(parts[1]), parse_complex(parts[2]);
    file.curve = chain_from_normal(spec, a.samples);
    file.meta["normal"] = json::array({complex_json(spec.normal(0)), complex_json(spec.normal(1)),
                                       complex_json(spec.normal(2))});
  } else {
    if (a.through.empty() || a.dir.empty())
      fail(ErrorCode::InvalidArgument, "chain needs --normal or both --through and --dir");
    Eigen::Vector3d p = parse_triple(a.through), v = parse_triple(a.dir);
    HeisenbergPoint hp{p.x(), p.y(), p.z()};
    file.curve = chain_through(hp, v, a.samples);
    file.meta["through"] = {p.x(), p.y(), p.z()};
    file.meta["direction"] = {v.x(), v.y(), v.z()};
    file.meta["rate"] = chain_through_rate(hp, v);
  }
  save_curve(file, a.out);
  return 0;
}

// audit ----------------------------------------------------------------------

int cmd_audit(const std::string& out) {
  json r = provenance("audit");
  json entries = json::array();
  for (const auto& e : discrepancy_report()) {
    entries.push_back({{"name", e.name},
                       {"at", e.where},
                       {"printed", e.printed},
                       {"computed", e.computed},
                       {"diff", e.diff},
                       {"tol", e.tol},
                       {"status", e.pass ? "PASS" : "FLAG"},
                       {"note", e.note}});
  }
  r["entries"] = entries;
  emit(r, out);
  return 0;
}

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::DomainError: return 2;
    case ErrorCode::NoConvergence: return 3;
    case ErrorCode::NonTransversal: return 4;
    case ErrorCode::InflectionPresent: return 5;
    case ErrorCode::Unstable:
    case ErrorCode::SelfIntersecting: return 6;
    case ErrorCode::CurvesIntersect: return 7;
    default: return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CR invariants of transversal curves in the 3-sphere"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "Build a symmetric isoparametric configuration");
  construct->add_option("--kind", ca.kind, "first or second")->required();
  construct->add_option("--r", ca.r, "spectral ratio M/N")->required();
  construct->add_option("--rho", ca.rho, "Clifford parameter")->required();
  construct->add_option("--samples", ca.samples, "samples per period")->check(CLI::Range(5, 1 << 22));
  construct->add_option("--out", ca.out, "output curve file ('-' for stdout)");
  construct->add_option("--model", ca.model, "heisenberg or lift");

  InvariantsArgs ia;
  auto* invariants = app.add_subcommand("invariants", "Local and global invariants of a curve file");
  invariants->add_option("--in", ia.in, "curve file")->required();
  invariants->add_option("--report", ia.report, "report file ('-' for stdout)");
  invariants->add_option("--samples", ia.samples, "samples of the natural reparametrization");

  LinkArgs la;
  auto* link = app.add_subcommand("link", "Bennequin or CR self-linking number");
  link->add_option("--in", la.in, "closed curve file")->required();
  link->add_option("--pushoff", la.pushoff, "contact or crnormal");
  link->add_option("--epsilon", la.epsilon, "push-off distance (0 picks one)");
  link->add_option("--quadrature", la.quadrature, "points per curve")->check(CLI::Range(8, 1 << 20));
  link->add_option("--samples", la.samples, "samples of the natural reparametrization");
  link->add_option("--report", la.report, "report file ('-' for stdout)");

  CriticalArgs cra;
  auto* critical = app.add_subcommand("critical", "Closed critical curve of the total strain");
  critical->add_option("--p", cra.p)->required();
  critical->add_option("--q", cra.q)->required();
  critical->add_option("--report", cra.report, "report file ('-' for stdout)");
  critical->add_option("--out", cra.out, "also write the critical curve");
  critical->add_option("--samples", cra.samples)->check(CLI::Range(5, 1 << 22));

  ScanArgs sa;
  auto* scan = app.add_subcommand("scan", "Sweep configurations to CSV");
  scan->add_option("--kind", sa.kind)->required();
  scan->add_option("--r-list", sa.r_list, "comma-separated M/N values")->required();
  scan->add_option("--rho-grid", sa.rho_grid, "lo:hi:n")->required();
  scan->add_option("--samples", sa.samples)->check(CLI::Range(5, 1 << 22));
  scan->add_option("--quadrature", sa.quadrature)->check(CLI::Range(8, 1 << 20));
  scan->add_flag("--no-linking", sa.no_linking, "skip the linking columns");
  scan->add_option("--out", sa.out, "CSV file ('-' for stdout)");

  ReconstructArgs ra;
  auto* recon = app.add_subcommand("reconstruct", "Integrate a curve from bending and twist");
  recon->add_option("--kappa", ra.kappa, "expression in s, or a file of s,value rows")->required();
  recon->add_option("--tau", ra.tau, "expression in s, or a file of s,value rows")->required();
  recon->add_option("--length", ra.length)->required()->check(CLI::PositiveNumber);
  recon->add_option("--step", ra.step)->required()->check(CLI::PositiveNumber);
  recon->add_flag("--closed", ra.closed, "store one period of a closed curve");
  recon->add_option("--out", ra.out, "output curve file ('-' for stdout)");

  ChainArgs cha;
  auto* chain = app.add_subcommand("chain", "Sample a chain");
  chain->add_option("--normal", cha.normal, "spacelike normal a,b,c (complex entries like 0.7+0.7i)");
  chain->add_option("--through", cha.through, "point x,y,z");
  chain->add_option("--dir", cha.dir, "direction u,v,w");
  chain->add_option("--samples", cha.samples)->check(CLI::Range(5, 1 << 22));
  chain->add_option("--out", cha.out, "output curve file ('-' for stdout)");

  std::string audit_out = "-";
  auto* audit = app.add_subcommand("audit", "Compare printed closed forms with computed values");
  audit->add_option("--out", audit_out, "report file ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*construct) return cmd_construct(ca);
    if (*invariants) return cmd_invariants(ia);
    if (*link) return cmd_link(la);
    if (*critical) return cmd_critical(cra);
    if (*scan) return cmd_scan(sa);
    if (*recon) return cmd_reconstruct(ra);
    if (*chain) return cmd_chain(cha);
    if (*audit) return cmd_audit(audit_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
