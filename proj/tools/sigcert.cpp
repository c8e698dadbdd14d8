// sigcert: signature dumps and signature-based path certificates.
//
//   sigcert signature PATH --trunc K [-o OUT]
//   sigcert check KIND PATH [PROBLEM] [--trunc K] [--word-len L] ...
//   sigcert emit-plot PATH --indices 1,2 [-o OUT]
//
// Exit status: 0 PASS, 1 FAIL, 2 INCONCLUSIVE, 64 usage or configuration
// error, 65 malformed input, 66 unreadable file.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sigcert/certify.hpp"
#include "sigcert/errors.hpp"
#include "sigcert/path.hpp"
#include "sigcert/poly.hpp"
#include "sigcert/signature.hpp"

namespace {

using namespace sigcert;
using nlohmann::json;

constexpr int kExitUsage = 64;
constexpr int kExitParse = 65;
constexpr int kExitNoInput = 66;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open " + file);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text << '\n';
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw IoError("cannot write " + out);
  f << text << '\n';
}

PathModel load_path(const std::string& file, bool reduce) {
  slurp(file);  // distinguishes a missing file from malformed content
  PathModel x = read_path_file(file);
  if (reduce) {
    if (auto* pl = std::get_if<PiecewiseLinearPath>(&x))
      x = backtrack_reduce(*pl);
    else
      std::cerr << "note: --reduce only applies to piecewise-linear paths; sampled path left as is\n";
  }
  return x;
}

std::vector<double> vec_field(const json& j, const char* key) {
  if (!j.contains(key)) throw UsageError(std::string("problem file lacks \"") + key + "\"");
  return j.at(key).get<std::vector<double>>();
}

std::vector<std::vector<double>> matrix_field(const json& j, const char* key) {
  if (!j.contains(key)) throw UsageError(std::string("problem file lacks \"") + key + "\"");
  return j.at(key).get<std::vector<std::vector<double>>>();
}

std::size_t size_field(const json& j, const char* key) {
  if (!j.contains(key)) throw UsageError(std::string("problem file lacks \"") + key + "\"");
  return j.at(key).get<std::size_t>();
}

std::vector<MultiPoly> polys_field(const json& j, std::size_t d) {
  if (!j.contains("polynomials")) throw UsageError("problem file lacks \"polynomials\"");
  std::vector<MultiPoly> out;
  for (const auto& s : j.at("polynomials")) out.push_back(parse_poly(s.get<std::string>(), d));
  return out;
}

const json& init_field(const json& j) {
  if (!j.contains("init")) throw UsageError("problem file lacks \"init\"");
  return j.at("init");
}

struct CheckOptions {
  std::string kind;
  std::string path_file;
  std::string problem_file;
  std::optional<std::size_t> K;
  std::optional<std::size_t> L;
  std::optional<double> tol_pass;
  std::optional<double> tol_fail;
  bool strict_literal = false;
  bool reduce = false;
  bool assert_reduced = false;
  std::string out;
};

int run_check(const CheckOptions& o) {
  const PathModel x = load_path(o.path_file, o.reduce);
  CheckConfig cfg = CheckConfig::defaults_for(x);
  if (o.K) cfg.K = *o.K;
  if (o.L) cfg.L = *o.L;
  if (o.tol_pass) cfg.tol_pass = *o.tol_pass;
  if (o.tol_fail) cfg.tol_fail = *o.tol_fail;
  if (o.assert_reduced)
    cfg.reducedness = "asserted by user";
  else if (o.reduce && std::holds_alternative<PiecewiseLinearPath>(x))
    cfg.reducedness = "backtracks removed; assumed reduced otherwise";
  cfg.validate();

  json prob = json::object();
  if (!o.problem_file.empty()) {
    try {
      prob = json::parse(slurp(o.problem_file));
    } catch (const json::parse_error& e) {
      throw ParseError(o.problem_file + ": " + e.what(), e.byte);
    }
  }
  const std::size_t d = dimension(x);

  ResidualReport rep;
  if (o.kind == "variety") {
    VarietySpec spec{polys_field(prob, d), prob.value("anchored", false)};
    rep = variety_check(x, spec, cfg);
  } else if (o.kind == "holonomic") {
    rep = holonomy_check(x, size_field(prob, "r"), size_field(prob, "l"), cfg);
  } else if (o.kind == "legendrian") {
    rep = legendrian_check(x, cfg);
  } else if (o.kind == "cauchy") {
    CauchyProblem p;
    p.r = size_field(prob, "r");
    p.l = size_field(prob, "l");
    p.F = polys_field(prob, d);
    if (p.l > 0) p.init = matrix_field(init_field(prob), "v");
    rep = cauchy_check(x, p, cfg);
  } else if (o.kind == "linear-vf") {
    rep = linear_vf_check(x, matrix_field(prob, "matrixA"), vec_field(init_field(prob), "p"), cfg);
  } else if (o.kind == "hamiltonian") {
    HamiltonianProblem p;
    p.A = matrix_field(prob, "matrixA");
    p.v = vec_field(prob, "vectorV");
    p.x0 = vec_field(init_field(prob), "x0");
    p.p0 = vec_field(init_field(prob), "p0");
    p.strict_literal = o.strict_literal;
    rep = hamiltonian_check(x, p, cfg);
  } else if (o.kind == "sphere") {
    rep = sphere_invariant_check(x, cfg);
  } else {
    throw UsageError("unknown check kind " + o.kind);
  }

  emit(to_json_text(rep), o.out);
  std::cerr << rep.condition << ": " << to_string(rep.verdict)
            << " (max |residual| = " << rep.max_abs_residual
            << ", normalized " << rep.max_abs_normalized << ")\n";
  switch (rep.verdict) {
    case Verdict::Pass: return 0;
    case Verdict::Fail: return 1;
    case Verdict::Inconclusive: return 2;
  }
  return 2;
}

int run_signature(const std::string& path_file, std::size_t K, bool reduce,
                  const std::string& out) {
  const PathModel x = load_path(path_file, reduce);
  emit(to_json_text(signature(x, K)), out);
  return 0;
}

int run_emit_plot(const std::string& path_file, const std::vector<std::size_t>& indices,
                  const std::string& out) {
  const PathModel x = load_path(path_file, false);
  const PathModel p = project(x, indices);
  const SampledPath s = SampledPath::make(time_grid(p), nodes(p));
  std::ostringstream ss;
  write_csv_path(ss, s);
  std::string text = ss.str();
  if (!text.empty() && text.back() == '\n') text.pop_back();
  emit(text, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truncated path signatures and signature-based path certificates"};
  app.require_subcommand(1);

  std::string sig_path, sig_out;
  std::size_t sig_K = 4;
  bool sig_reduce = false;
  auto* sig = app.add_subcommand("signature", "Write the truncated signature of a path as JSON");
  sig->add_option("path", sig_path, "Path file (CSV samples or JSON vertex chain)")->required();
  sig->add_option("--trunc,-K", sig_K, "Truncation level")->check(CLI::Range(0, 16));
  sig->add_flag("--reduce", sig_reduce, "Remove backtracks from a piecewise-linear path first");
  sig->add_option("-o,--output", sig_out, "Output file (default stdout)");

  CheckOptions co;
  auto* chk = app.add_subcommand("check", "Evaluate a certificate condition on a path");
  chk->add_option("kind", co.kind, "Condition kind")
      ->required()
      ->check(CLI::IsMember(
          {"variety", "holonomic", "legendrian", "cauchy", "linear-vf", "hamiltonian", "sphere"}));
  chk->add_option("path", co.path_file, "Path file")->required();
  chk->add_option("problem", co.problem_file, "Problem JSON file");
  chk->add_option("--trunc,-K", co.K, "Signature truncation level");
  chk->add_option("--word-len,-L", co.L, "Longest quantified word");
  chk->add_option("--tol-pass", co.tol_pass, "Residual bound for PASS");
  chk->add_option("--tol-fail", co.tol_fail, "Residual bound above which the verdict is FAIL");
  chk->add_flag("--strict-literal", co.strict_literal,
                "Hamiltonian: use A*x0 for the fourth block of X(0)");
  chk->add_flag("--reduce", co.reduce, "Remove backtracks from a piecewise-linear path first");
  chk->add_flag("--assert-reduced", co.assert_reduced, "Record the path as reduced by assertion");
  chk->add_option("-o,--output", co.out, "Report file (default stdout)");

  std::string plot_path, plot_out, plot_indices;
  auto* plot = app.add_subcommand("emit-plot", "Write a coordinate projection as CSV");
  plot->add_option("path", plot_path, "Path file")->required();
  plot->add_option("--indices", plot_indices, "Comma-separated 1-based coordinates")->required();
  plot->add_option("-o,--output", plot_out, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*sig) return run_signature(sig_path, sig_K, sig_reduce, sig_out);
    if (*chk) return run_check(co);
    std::vector<std::size_t> idx;
    std::stringstream ss(plot_indices);
    for (std::string item; std::getline(ss, item, ',');) {
      if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
        throw UsageError("bad coordinate index '" + item + "'");
      idx.push_back(std::stoul(item));
    }
    return run_emit_plot(plot_path, idx, plot_out);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const json::exception& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNoInput;
  } catch (const sigcert::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
