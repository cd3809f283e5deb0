// gapforge: covering systems, CRT gap certificates, sieve weights,
// K-th-power Maier matrices, and special prime sequences from one CLI.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gapforge/certificate.hpp"
#include "gapforge/covering.hpp"
#include "gapforge/hypercover.hpp"
#include "gapforge/kpower.hpp"
#include "gapforge/manifest.hpp"
#include "gapforge/maynard.hpp"
#include "gapforge/primes.hpp"
#include "gapforge/special_seq.hpp"
#include "gapforge/tuples.hpp"

namespace {

using namespace gapforge;
using manifest::RunManifest;
using manifest::format_double;
using u64 = std::uint64_t;
using i64 = std::int64_t;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;

struct GlobalOptions {
  unsigned jobs = 1;
  bool assume_good_modulus = false;
};

// jobs is an execution detail like timing: it never changes results, so it
// stays out of file-embedded manifests to keep outputs byte-identical
// across --jobs settings.
void finish_manifest(RunManifest& m, const GlobalOptions& g) {
  if (g.assume_good_modulus) m.assumptions.push_back("good-modulus");
}

// "-" writes to stdout
void write_text(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<u64> parse_u64_list(const std::string& csv) {
  std::vector<u64> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stoull(item));
  return out;
}

maynard::LinearFormSet parse_forms(const std::string& text) {
  maynard::LinearFormSet L;
  std::stringstream ss(text);
  std::string form;
  while (std::getline(ss, form, ';')) {
    const auto comma = form.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("forms look like 'a,b;a,b;...'");
    maynard::LinearForm f;
    f.a = std::stoll(form.substr(0, comma));
    f.b = std::stoll(form.substr(comma + 1));
    if (f.a == 0) throw std::invalid_argument("form slope must be nonzero");
    L.forms.push_back(f);
  }
  if (L.forms.empty()) throw std::invalid_argument("no linear forms given");
  return L;
}

nlohmann::json cover_to_json(const covering::CoveringSystem& cs,
                             const RunManifest& m) {
  nlohmann::json j;
  j["version"] = 1;
  j["x"] = cs.x;
  j["y"] = cs.y;
  j["complete"] = cs.complete;
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& c : cs.classes)
    classes.push_back({{"p", c.modulus}, {"h", c.residue}, {"stage", c.stage}});
  j["classes"] = std::move(classes);
  j["manifest"] = m.to_json();
  return j;
}

covering::CoveringSystem cover_from_json(const nlohmann::json& j) {
  covering::CoveringSystem cs;
  cs.x = j.at("x").get<u64>();
  cs.y = j.at("y").get<u64>();
  cs.complete = j.at("complete").get<bool>();
  for (const auto& c : j.at("classes"))
    cs.classes.push_back({c.at("p").get<u64>(), c.at("h").get<u64>(),
                          c.at("stage").get<int>()});
  return cs;
}

// ---------------------------------------------------------------- gaps ----

int run_gaps_scan(u64 limit, const std::string& csv_path,
                  const GlobalOptions& g) {
  RunManifest m;
  m.command = "gaps scan";
  m.parameters["limit"] = std::to_string(limit);
  m.parameters["csv"] = csv_path;
  finish_manifest(m, g);
  auto records = primes::gap_scan(limit);
  std::ostringstream out;
  manifest::emit_plotdata(out, records, m);
  write_text(csv_path, out.str());
  return kExitOk;
}

int run_gaps_rankin(double x) {
  std::cout << format_double(primes::rankin_lower_bound(x)) << "\n";
  return kExitOk;
}

int run_smooth(u64 x, u64 y, std::optional<double> eta) {
  const u64 psi = primes::psi_exact(x, y);
  std::cout << "psi_exact," << psi << "\n";
  if (eta) {
    if (*eta <= 1.0)
      std::cerr << "warning: eta <= 1 is outside the classical statement; "
                   "the bound still holds for eta > 0\n";
    std::cout << "rankin_bound,"
              << format_double(primes::rankin_upper_bound(x, y, *eta)) << "\n";
    std::cout << "eta," << format_double(*eta) << "\n";
  } else {
    auto r = primes::optimize_eta(x, y);
    std::cout << "rankin_bound," << format_double(r.bound) << "\n";
    std::cout << "eta," << format_double(r.eta) << "\n";
  }
  return kExitOk;
}

// --------------------------------------------------------------- cover ----

int run_cover_build(u64 x, u64 y, const std::string& json_path,
                    const GlobalOptions& g) {
  RunManifest m;
  m.command = "cover build";
  m.parameters["x"] = std::to_string(x);
  m.parameters["y"] = std::to_string(y);
  finish_manifest(m, g);
  auto cs = covering::build_erdos_covering(x, y);
  write_text(json_path, cover_to_json(cs, m).dump(2) + "\n");
  std::cerr << (cs.complete ? "complete" : "incomplete") << " covering with "
            << cs.classes.size() << " classes\n";
  return kExitOk;
}

int run_cover_verify(const std::string& path) {
  auto cs = cover_from_json(nlohmann::json::parse(read_text(path)));
  auto res = covering::verify_covering(cs);
  if (res.covered) {
    std::cout << "covered\n";
    return kExitOk;
  }
  std::cout << "uncovered offset " << *res.first_uncovered << "\n";
  return kExitVerifyFail;
}

// ---------------------------------------------------------------- cert ----

int run_cert_make(const std::string& cover_path, u64 lift,
                  const std::string& out_path, const GlobalOptions& g) {
  RunManifest m;
  m.command = "cert make";
  m.parameters["cover"] = cover_path;
  m.parameters["lift"] = std::to_string(lift);
  finish_manifest(m, g);
  auto cs = cover_from_json(nlohmann::json::parse(read_text(cover_path)));
  auto cert = crtgap::lift_certificate(crtgap::certify_gap(cs), lift);
  auto j = crtgap::to_json(cert);
  j["manifest"] = m.to_json();
  write_text(out_path, j.dump(2) + "\n");
  return kExitOk;
}

int run_cert_verify(const std::string& path, const GlobalOptions& g) {
  auto cert =
      crtgap::certificate_from_json(nlohmann::json::parse(read_text(path)));
  auto out = crtgap::verify_certificate(cert, g.jobs);
  if (out.ok) {
    std::cout << "valid: every offset in (0," << cert.y
              << "] carries a proper divisor witness\n";
    return kExitOk;
  }
  std::cout << "invalid";
  if (out.failing_offset) std::cout << " at offset " << *out.failing_offset;
  std::cout << ": " << out.reason << "\n";
  return kExitVerifyFail;
}

int run_cert_brute(const std::string& path) {
  auto cert =
      crtgap::certificate_from_json(nlohmann::json::parse(read_text(path)));
  auto rec = crtgap::brute_gap_check(cert);
  std::cout << "p_lo," << rec.p_lo << "\np_hi," << rec.p_hi << "\ngap,"
            << rec.gap << "\n";
  return rec.gap >= cert.y ? kExitOk : kExitVerifyFail;
}

// --------------------------------------------------------------- tuple ----

int run_tuple_check(const std::string& offsets_csv) {
  auto offsets = parse_u64_list(offsets_csv);
  const bool ok = tuples::is_admissible(offsets);
  std::cout << (ok ? "admissible" : "inadmissible") << "\n";
  return ok ? kExitOk : kExitVerifyFail;
}

int run_tuple_gen(unsigned r) {
  auto t = tuples::first_primes_tuple(r);
  for (std::size_t i = 0; i < t.offsets.size(); ++i)
    std::cout << t.offsets[i] << (i + 1 < t.offsets.size() ? "," : "\n");
  return kExitOk;
}

// --------------------------------------------------------------- sieve ----

int run_sieve_gpy(u64 N, double rho, const std::string& tuple_csv, double R,
                  unsigned k) {
  auto t = tuples::make_tuple(parse_u64_list(tuple_csv));
  tuples::GPYConfig cfg{k, R};
  auto s = tuples::s_statistic(N, rho, t, cfg);
  std::cout << "S," << format_double(s.value) << "\n";
  if (s.witness)
    std::cout << "witness," << *s.witness << "\n";
  else
    std::cout << "witness,none\n";
  return kExitOk;
}

int run_sieve_maynard(const std::string& forms, double R, u64 B,
                      std::optional<unsigned> k_check,
                      std::optional<double> Fa, u64 n_lo, u64 n_hi,
                      const std::string& emit_path, const GlobalOptions& g) {
  RunManifest m;
  m.command = "sieve maynard";
  m.parameters["forms"] = forms;
  m.parameters["R"] = format_double(R);
  m.parameters["B"] = std::to_string(B);
  m.parameters["n_lo"] = std::to_string(n_lo);
  m.parameters["n_hi"] = std::to_string(n_hi);
  finish_manifest(m, g);
  auto L = parse_forms(forms);
  if (k_check && *k_check != L.k())
    throw std::invalid_argument("--k disagrees with the number of forms");
  auto F =
      Fa ? maynard::SimplexFunction::power(*Fa) : maynard::SimplexFunction{};
  auto st = maynard::build_maynard_state(L, R, B, F);
  std::ostringstream out;
  out << m.comment_line() << "\n";
  out << "n,w\n";
  for (u64 n = n_lo; n <= n_hi; ++n)
    out << n << ','
        << format_double(maynard::maynard_weight(static_cast<i64>(n), st, L))
        << "\n";
  write_text(emit_path, out.str());
  std::cerr << "lambda table size " << st.lambda.size() << ", W = " << st.W
            << ", truncated series " << format_double(st.series_wb) << "\n";
  return kExitOk;
}

int run_sieve_ikjk(unsigned k, double Fa, u64 samples, u64 seed) {
  auto F = maynard::SimplexFunction::power(Fa);
  auto r = maynard::ik_jk(F, k, samples, seed);
  std::cout << "I," << format_double(r.I) << "\nI_se," << format_double(r.se_I)
            << "\nJ," << format_double(r.J) << "\nJ_se,"
            << format_double(r.se_J) << "\n";
  return kExitOk;
}

// -------------------------------------------------------------- kpower ----

int run_kpower_solvable(u64 p, u64 K, i64 n) {
  kpower::KPowerContext ctx(p, K);
  const bool ok = ctx.solvable(n);
  std::cout << (ok ? "solvable" : "unsolvable") << "\n";
  std::cout << "indicator," << format_double(ctx.character_indicator(n))
            << "\n";
  return kExitOk;
}

int run_kpower_matrix(const std::string& cert_path, u64 K, u64 rows,
                      const std::string& report_path, const GlobalOptions& g) {
  RunManifest m;
  m.command = "kpower matrix";
  m.parameters["cert"] = cert_path;
  m.parameters["K"] = std::to_string(K);
  m.parameters["rows"] = std::to_string(rows);
  finish_manifest(m, g);
  auto cert =
      crtgap::certificate_from_json(nlohmann::json::parse(read_text(cert_path)));
  auto sys = kpower::lift_to_kpower(cert, K);
  auto M = kpower::matrix_from_system(sys, rows);
  auto scan = kpower::scan_rows(M, sys.exceptional, sys.witnesses, g.jobs);
  std::ostringstream out;
  out << m.comment_line() << "\n";
  out << "r,base_prime,interior_prime,winner,probable\n";
  std::vector<char> in_r0(rows + 1, 0), in_r1(rows + 1, 0), win(rows + 1, 0);
  for (u64 r : scan.prime_base_rows) in_r0[r] = 1;
  for (u64 r : scan.rows_with_prime) in_r1[r] = 1;
  for (u64 r : scan.winners) win[r] = 1;
  for (u64 r = 1; r <= rows; ++r)
    out << r << ',' << int(in_r0[r]) << ',' << int(in_r1[r]) << ','
        << int(win[r]) << ',' << (scan.any_probable ? 1 : 0) << "\n";
  write_text(report_path, out.str());
  std::cerr << scan.prime_base_rows.size() << " prime-base rows, "
            << scan.winners.size() << " winners, " << sys.exceptional.size()
            << " exceptional offsets\n";
  return kExitOk;
}

int run_kpower_find(const std::string& cert_path, u64 K, u64 rows,
                    const GlobalOptions& g) {
  auto cert =
      crtgap::certificate_from_json(nlohmann::json::parse(read_text(cert_path)));
  auto hit = kpower::find_kth_power_in_gap(cert, K, rows, g.jobs);
  if (!hit) {
    std::cout << "none-found\n";
    return kExitOk;
  }
  std::cout << "q," << to_dec(hit->q) << "\nq_pow_K," << to_dec(hit->qk)
            << "\np_lo," << to_dec(hit->p_lo) << "\np_hi," << to_dec(hit->p_hi)
            << "\n";
  return kExitOk;
}

// --------------------------------------------------------------- hyper ----

hyper::LayeredEdgeModel model_from_json(const nlohmann::json& j) {
  hyper::LayeredEdgeModel m;
  m.vertex_count = j.at("vertices").get<hyper::u32>();
  for (const auto& layer : j.at("layers")) {
    std::vector<hyper::Edge> edges;
    for (const auto& e : layer) {
      hyper::Edge edge;
      for (const auto& c : e.at("candidates"))
        edge.candidates.push_back(
            {c.at(0).get<hyper::u32>(), c.at(1).get<double>()});
      edges.push_back(std::move(edge));
    }
    m.layers.push_back(std::move(edges));
  }
  return m;
}

int run_hyper_pj(const std::string& degrees_path, const std::string& out_path,
                 const GlobalOptions& g) {
  RunManifest m;
  m.command = "hyper pj";
  m.parameters["degrees"] = degrees_path;
  finish_manifest(m, g);
  std::vector<std::vector<double>> degrees;
  std::stringstream in(read_text(degrees_path));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    degrees.push_back(std::move(row));
  }
  double min_p = 1.0;
  auto P = hyper::pj_recursion(degrees, &min_p);
  std::ostringstream out;
  out << m.comment_line() << "\n";
  for (const auto& row : P) {
    for (std::size_t v = 0; v < row.size(); ++v)
      out << (v ? "," : "") << format_double(row[v]);
    out << "\n";
  }
  write_text(out_path, out.str());
  std::cerr << "min P_j(v) = " << format_double(min_p) << "\n";
  return kExitOk;
}

int run_hyper_nibble(const std::string& model_path, hyper::u32 m_layers,
                     u64 trials, u64 seed, const std::string& out_path,
                     const GlobalOptions& g) {
  RunManifest m;
  m.command = "hyper nibble";
  m.parameters["model"] = model_path;
  m.parameters["m"] = std::to_string(m_layers);
  m.parameters["trials"] = std::to_string(trials);
  m.seed = seed;
  finish_manifest(m, g);
  auto model = model_from_json(nlohmann::json::parse(read_text(model_path)));
  auto rep = hyper::nibble_simulate(model, m_layers, trials, seed, g.jobs);
  std::ostringstream out;
  out << m.comment_line() << "\n";
  out << "layer,observed,predicted,std_error\n";
  for (std::size_t j = 0; j < rep.observed.size(); ++j)
    out << (j + 1) << ',' << format_double(rep.observed[j]) << ','
        << format_double(rep.predicted[j]) << ','
        << format_double(rep.std_error[j]) << "\n";
  out << "reference_density," << format_double(rep.reference_density) << ",,\n";
  write_text(out_path, out.str());
  return kExitOk;
}

hyper::ColoredGraph graph_from_json(const nlohmann::json& j) {
  hyper::ColoredGraph g;
  g.vertices = j.at("vertices").get<hyper::u32>();
  g.colors = j.at("colors").get<hyper::u32>();
  for (const auto& e : j.at("edges"))
    g.edges.push_back({e.at(0).get<hyper::u32>(), e.at(1).get<hyper::u32>(),
                       e.at(2).get<hyper::u32>()});
  return g;
}

int run_hyper_match(const std::string& graph_path, hyper::u32 K,
                    const std::string& out_path, const GlobalOptions& g) {
  RunManifest m;
  m.command = "hyper match";
  m.parameters["graph"] = graph_path;
  m.parameters["K"] = std::to_string(K);
  finish_manifest(m, g);
  auto graph = graph_from_json(nlohmann::json::parse(read_text(graph_path)));
  auto match = hyper::greedy_color_matching(graph, K);
  nlohmann::json j;
  j["manifest"] = m.to_json();
  j["matching_size"] = match.size();
  nlohmann::json edges = nlohmann::json::array();
  for (auto idx : match) {
    const auto& e = graph.edges[idx];
    edges.push_back({e.a, e.b, e.color});
  }
  j["edges"] = std::move(edges);
  write_text(out_path, j.dump(2) + "\n");
  return kExitOk;
}

int run_hyper_gen(hyper::u32 N, hyper::u32 K, hyper::u32 c, hyper::u32 D,
                  u64 seed, const std::string& out_path,
                  const GlobalOptions& g) {
  RunManifest m;
  m.command = "hyper gen";
  m.parameters["N"] = std::to_string(N);
  m.parameters["K"] = std::to_string(K);
  m.parameters["c"] = std::to_string(c);
  m.parameters["D"] = std::to_string(D);
  m.seed = seed;
  finish_manifest(m, g);
  auto graph = hyper::make_uniform_colored_graph(N, K, c, D, seed);
  nlohmann::json j;
  j["manifest"] = m.to_json();
  j["vertices"] = graph.vertices;
  j["colors"] = graph.colors;
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : graph.edges) edges.push_back({e.a, e.b, e.color});
  j["edges"] = std::move(edges);
  write_text(out_path, j.dump(2) + "\n");
  return kExitOk;
}

// ------------------------------------------------------------- special ----

int run_special_beatty(const std::string& alpha, const std::string& beta,
                       u64 limit, const std::string& csv_path,
                       const GlobalOptions& g) {
  RunManifest m;
  m.command = "special beatty";
  m.parameters["alpha"] = alpha;
  m.parameters["beta"] = beta;
  m.parameters["limit"] = std::to_string(limit);
  finish_manifest(m, g);
  auto beta_val = special::QuadVal::parse(beta);
  if (!beta_val.is_rational())
    throw std::invalid_argument("beta must be rational");
  auto params = special::BeattyParams::make(special::QuadVal::parse(alpha),
                                            beta_val.as_rational());
  auto primes_list = special::beatty_primes(limit, params);
  std::ostringstream out;
  out << m.comment_line() << "\n";
  out << "prime,n\n";
  for (const auto& sp : primes_list)
    out << sp.value << ',' << sp.witness << "\n";
  write_text(csv_path, out.str());
  return kExitOk;
}

int run_special_ps(const std::string& c_text, u64 limit,
                   const std::string& csv_path, const GlobalOptions& g) {
  RunManifest m;
  m.command = "special ps";
  m.parameters["c"] = c_text;
  m.parameters["limit"] = std::to_string(limit);
  finish_manifest(m, g);
  auto c_val = special::QuadVal::parse(c_text);
  if (!c_val.is_rational())
    throw std::invalid_argument("c must be rational (e.g. 1.05 or 21/20)");
  auto params = special::PSParams::make(c_val.as_rational());
  auto primes_list = special::ps_primes(limit, params);
  std::ostringstream out;
  out << m.comment_line() << "\n";
  out << "prime,l\n";
  for (const auto& sp : primes_list)
    out << sp.value << ',' << sp.witness << "\n";
  write_text(csv_path, out.str());
  if (!params.in_theorem_range()) std::cerr << "note: c outside (1, 18/17)\n";
  return kExitOk;
}

int run_special_scan(const std::string& cert_path, u64 K,
                     const std::string& family, const std::string& alpha,
                     const std::string& beta, const std::string& c_text,
                     u64 rows, const GlobalOptions& g) {
  auto cert =
      crtgap::certificate_from_json(nlohmann::json::parse(read_text(cert_path)));
  auto sys = kpower::lift_to_kpower(cert, K);
  auto M = kpower::matrix_from_system(sys, rows);
  auto scan = kpower::scan_rows(M, sys.exceptional, sys.witnesses, g.jobs);

  special::SequenceFamily fam;
  if (family == "all") {
    fam = special::SequenceFamily::all();
  } else if (family == "beatty") {
    auto beta_val = special::QuadVal::parse(beta);
    fam = special::SequenceFamily::beatty(special::BeattyParams::make(
        special::QuadVal::parse(alpha), beta_val.as_rational()));
  } else if (family == "ps") {
    fam = special::SequenceFamily::piatetski_shapiro(
        special::PSParams::make(special::QuadVal::parse(c_text).as_rational()));
  } else {
    throw std::invalid_argument("--family must be all, beatty or ps");
  }
  auto kept = special::restricted_column_scan(M, scan.winners, fam);
  std::cout << "winners," << scan.winners.size() << "\n";
  std::cout << "family_winners," << kept.size() << "\n";
  for (u64 r : kept) std::cout << r << ',' << to_dec(M.base(r)) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"desk-scale prime gap constructions and certificates"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--jobs", global.jobs, "worker threads")
      ->capture_default_str();
  app.add_flag("--assume-good-modulus", global.assume_good_modulus,
               "record the good-modulus assumption in output metadata");

  // gaps
  auto* gaps = app.add_subcommand("gaps", "prime gap scans and normalizations");
  auto* gaps_scan = gaps->add_subcommand("scan", "scan consecutive prime gaps");
  u64 scan_limit = 1000;
  std::string scan_csv = "-";
  gaps_scan->add_option("--limit", scan_limit, "scan primes up to this bound")
      ->required();
  gaps_scan->add_option("--csv", scan_csv, "output CSV path or -");
  auto* gaps_rankin = gaps->add_subcommand("rankin", "gap normalization value");
  double rankin_x = 0;
  gaps_rankin->add_option("--x", rankin_x, "evaluation point")->required();

  // smooth
  auto* smooth = app.add_subcommand("smooth", "smooth counts and bounds");
  u64 smooth_x = 0, smooth_y = 0;
  smooth->add_option("--x", smooth_x)->required();
  smooth->add_option("--y", smooth_y)->required();
  double smooth_eta_val = 0;
  auto* eta_opt = smooth->add_option("--eta", smooth_eta_val,
                                     "fixed exponent instead of optimizing");

  // cover
  auto* cover = app.add_subcommand("cover", "covering systems");
  auto* cover_build = cover->add_subcommand("build", "build a staged covering");
  u64 cb_x = 0, cb_y = 0;
  std::string cb_json = "-";
  cover_build->add_option("--x", cb_x)->required();
  cover_build->add_option("--y", cb_y)->required();
  cover_build->add_option("--json", cb_json, "output path or -");
  auto* cover_verify = cover->add_subcommand("verify", "verify a covering file");
  std::string cv_path;
  cover_verify->add_option("file", cv_path)->required();

  // cert
  auto* cert = app.add_subcommand("cert", "gap certificates");
  auto* cert_make = cert->add_subcommand("make", "assemble m0 and witnesses");
  std::string cm_cover, cm_out = "-";
  u64 cm_lift = 1;
  cert_make->add_option("cover", cm_cover)->required();
  cert_make->add_option("--lift", cm_lift, "modulus shifts to apply");
  cert_make->add_option("--out", cm_out, "output path or -");
  auto* cert_verify = cert->add_subcommand("verify", "check all witnesses");
  std::string cvf_path;
  cert_verify->add_option("file", cvf_path)->required();
  auto* cert_brute = cert->add_subcommand("brute", "independent primality scan");
  std::string cbr_path;
  cert_brute->add_option("file", cbr_path)->required();

  // tuple
  auto* tuple = app.add_subcommand("tuple", "admissible tuples");
  auto* tuple_check = tuple->add_subcommand("check", "test admissibility");
  std::string tc_offsets;
  tuple_check->add_option("offsets", tc_offsets, "comma-separated offsets")
      ->required();
  auto* tuple_gen = tuple->add_subcommand("gen", "first r primes beyond r");
  unsigned tg_r = 1;
  tuple_gen->add_option("--r", tg_r)->required();

  // sieve
  auto* sieve = app.add_subcommand("sieve", "GPY and Maynard weights");
  auto* sieve_gpy = sieve->add_subcommand("gpy", "one-dimensional S(N, rho)");
  u64 sg_N = 0;
  double sg_rho = 0, sg_R = 2;
  unsigned sg_k = 1;
  std::string sg_tuple;
  sieve_gpy->add_option("--N", sg_N)->required();
  sieve_gpy->add_option("--rho", sg_rho)->required();
  sieve_gpy->add_option("--tuple", sg_tuple)->required();
  sieve_gpy->add_option("--R", sg_R)->required();
  sieve_gpy->add_option("--k", sg_k)->required();
  auto* sieve_maynard =
      sieve->add_subcommand("maynard", "divisor-tuple weights");
  std::string sm_forms, sm_emit = "-";
  double sm_R = 10;
  u64 sm_B = 1, sm_nlo = 1, sm_nhi = 100;
  double sm_Fa_val = 0;
  sieve_maynard->add_option("--forms", sm_forms, "a,b;a,b;...")->required();
  sieve_maynard->add_option("--R", sm_R)->required();
  unsigned sm_k = 0;
  auto* sm_k_opt = sieve_maynard->add_option("--k", sm_k, "cross-check form count");
  sieve_maynard->add_option("--B", sm_B, "excluded prime (1 for none)");
  auto* fa_opt = sieve_maynard->add_option("--F", sm_Fa_val,
                                           "power-family degree (default k)");
  sieve_maynard->add_option("--n-lo", sm_nlo);
  sieve_maynard->add_option("--n-hi", sm_nhi);
  sieve_maynard->add_option("--emit", sm_emit, "weights CSV path or -");
  auto* sieve_ikjk = sieve->add_subcommand("ikjk", "simplex functionals");
  unsigned si_k = 2;
  double si_F = 2;
  u64 si_samples = 1000000, si_seed = 42;
  sieve_ikjk->add_option("--k", si_k)->required();
  sieve_ikjk->add_option("--F", si_F, "power-family degree")->required();
  sieve_ikjk->add_option("--samples", si_samples);
  sieve_ikjk->add_option("--seed", si_seed, "fixed default 42");

  // kpower
  auto* kp = app.add_subcommand("kpower", "K-th power residue machinery");
  auto* kp_solv = kp->add_subcommand("solvable", "solvability at one prime");
  u64 ks_p = 0, ks_K = 1;
  i64 ks_n = 0;
  kp_solv->add_option("--p", ks_p)->required();
  kp_solv->add_option("--K", ks_K)->required();
  kp_solv->add_option("--n", ks_n)->required();
  auto* kp_matrix = kp->add_subcommand("matrix", "scan Maier matrix rows");
  std::string km_cert, km_report = "-";
  u64 km_K = 2, km_rows = 100;
  kp_matrix->add_option("--cert", km_cert)->required();
  kp_matrix->add_option("--K", km_K)->required();
  kp_matrix->add_option("--rows", km_rows)->required();
  kp_matrix->add_option("--report", km_report, "CSV path or -");
  auto* kp_find = kp->add_subcommand("find", "K-th prime power inside a gap");
  std::string kf_cert;
  u64 kf_K = 2, kf_rows = 0;
  kp_find->add_option("--cert", kf_cert)->required();
  kp_find->add_option("--K", kf_K)->required();
  kp_find->add_option("--rows", kf_rows,
                      "Maier rows to search when direct scan misses");

  // hyper
  auto* hy = app.add_subcommand("hyper", "probabilistic covering tools");
  auto* hy_pj = hy->add_subcommand("pj", "run the P_j recursion on degrees");
  std::string hp_degrees, hp_out = "-";
  hy_pj->add_option("--degrees", hp_degrees, "CSV, one layer per row")
      ->required();
  hy_pj->add_option("--out", hp_out);
  auto* hy_nibble = hy->add_subcommand("nibble", "random-greedy thinning runs");
  std::string hn_model, hn_out = "-";
  hyper::u32 hn_m = 1;
  u64 hn_trials = 1000, hn_seed = 0;
  hy_nibble->add_option("--model", hn_model)->required();
  hy_nibble->add_option("--m", hn_m)->required();
  hy_nibble->add_option("--trials", hn_trials)->required();
  auto* hn_seed_opt = hy_nibble->add_option("--seed", hn_seed, "required");
  hy_nibble->add_option("--out", hn_out);
  auto* hy_match = hy->add_subcommand("match", "block-greedy colored matching");
  std::string hm_graph, hm_out = "-";
  hyper::u32 hm_K = 1;
  hy_match->add_option("--graph", hm_graph)->required();
  hy_match->add_option("--K", hm_K)->required();
  hy_match->add_option("--out", hm_out);
  auto* hy_gen = hy->add_subcommand("gen", "generate a K-uniform colored graph");
  hyper::u32 hg_N = 8, hg_K = 2, hg_c = 1, hg_D = 1;
  u64 hg_seed = 0;
  std::string hg_out = "-";
  hy_gen->add_option("--N", hg_N)->required();
  hy_gen->add_option("--K", hg_K)->required();
  hy_gen->add_option("--c", hg_c);
  hy_gen->add_option("--D", hg_D);
  auto* hg_seed_opt = hy_gen->add_option("--seed", hg_seed, "required");
  hy_gen->add_option("--json", hg_out);

  // special
  auto* sp = app.add_subcommand("special", "Beatty and Piatetski-Shapiro");
  auto* sp_beatty = sp->add_subcommand("beatty", "Beatty primes up to a limit");
  std::string sb_alpha, sb_beta = "0", sb_csv = "-";
  u64 sb_limit = 100;
  sp_beatty->add_option("--alpha", sb_alpha, "e.g. sqrt2, 3/2, 1.618")
      ->required();
  sp_beatty->add_option("--beta", sb_beta);
  sp_beatty->add_option("--limit", sb_limit)->required();
  sp_beatty->add_option("--csv", sb_csv);
  auto* sp_ps = sp->add_subcommand("ps", "Piatetski-Shapiro primes");
  std::string sps_c, sps_csv = "-";
  u64 sps_limit = 100;
  sp_ps->add_option("--c", sps_c, "rational exponent, e.g. 1.05")->required();
  sp_ps->add_option("--limit", sps_limit)->required();
  sp_ps->add_option("--csv", sps_csv);
  auto* sp_scan = sp->add_subcommand("scan", "family-restricted winner rows");
  std::string ss_cert, ss_family = "all", ss_alpha = "sqrt2", ss_beta = "0",
              ss_c = "1.05";
  u64 ss_K = 2, ss_rows = 100;
  sp_scan->add_option("--cert", ss_cert)->required();
  sp_scan->add_option("--K", ss_K)->required();
  sp_scan->add_option("--family", ss_family, "all, beatty or ps");
  sp_scan->add_option("--alpha", ss_alpha);
  sp_scan->add_option("--beta", ss_beta);
  sp_scan->add_option("--c", ss_c);
  sp_scan->add_option("--rows", ss_rows);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints message/help
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  const auto started = std::chrono::steady_clock::now();
  int code = kExitUsage;
  try {
    if (gaps_scan->parsed())
      code = run_gaps_scan(scan_limit, scan_csv, global);
    else if (gaps_rankin->parsed())
      code = run_gaps_rankin(rankin_x);
    else if (smooth->parsed())
      code = run_smooth(smooth_x, smooth_y,
                        eta_opt->count() ? std::optional<double>(smooth_eta_val)
                                         : std::nullopt);
    else if (cover_build->parsed())
      code = run_cover_build(cb_x, cb_y, cb_json, global);
    else if (cover_verify->parsed())
      code = run_cover_verify(cv_path);
    else if (cert_make->parsed())
      code = run_cert_make(cm_cover, cm_lift, cm_out, global);
    else if (cert_verify->parsed())
      code = run_cert_verify(cvf_path, global);
    else if (cert_brute->parsed())
      code = run_cert_brute(cbr_path);
    else if (tuple_check->parsed())
      code = run_tuple_check(tc_offsets);
    else if (tuple_gen->parsed())
      code = run_tuple_gen(tg_r);
    else if (sieve_gpy->parsed())
      code = run_sieve_gpy(sg_N, sg_rho, sg_tuple, sg_R, sg_k);
    else if (sieve_maynard->parsed())
      code = run_sieve_maynard(
          sm_forms, sm_R, sm_B,
          sm_k_opt->count() ? std::optional<unsigned>(sm_k) : std::nullopt,
          fa_opt->count() ? std::optional<double>(sm_Fa_val) : std::nullopt,
          sm_nlo, sm_nhi, sm_emit, global);
    else if (sieve_ikjk->parsed())
      code = run_sieve_ikjk(si_k, si_F, si_samples, si_seed);
    else if (kp_solv->parsed())
      code = run_kpower_solvable(ks_p, ks_K, ks_n);
    else if (kp_matrix->parsed())
      code = run_kpower_matrix(km_cert, km_K, km_rows, km_report, global);
    else if (kp_find->parsed())
      code = run_kpower_find(kf_cert, kf_K, kf_rows, global);
    else if (hy_pj->parsed())
      code = run_hyper_pj(hp_degrees, hp_out, global);
    else if (hy_nibble->parsed()) {
      if (hn_seed_opt->count() == 0) {
        std::cerr << "hyper nibble: --seed is required\n";
        return kExitUsage;
      }
      code = run_hyper_nibble(hn_model, hn_m, hn_trials, hn_seed, hn_out,
                              global);
    } else if (hy_match->parsed())
      code = run_hyper_match(hm_graph, hm_K, hm_out, global);
    else if (hy_gen->parsed()) {
      if (hg_seed_opt->count() == 0) {
        std::cerr << "hyper gen: --seed is required\n";
        return kExitUsage;
      }
      code = run_hyper_gen(hg_N, hg_K, hg_c, hg_D, hg_seed, hg_out, global);
    } else if (sp_beatty->parsed())
      code = run_special_beatty(sb_alpha, sb_beta, sb_limit, sb_csv, global);
    else if (sp_ps->parsed())
      code = run_special_ps(sps_c, sps_limit, sps_csv, global);
    else if (sp_scan->parsed())
      code = run_special_scan(ss_cert, ss_K, ss_family, ss_alpha, ss_beta,
                              ss_c, ss_rows, global);
    else {
      std::cerr << "no subcommand selected\n";
      return kExitUsage;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerifyFail;
  }
  const auto elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  std::cerr << "elapsed " << format_double(elapsed) << "s\n";
  return code;
}
