// Command-line front end. Each subcommand reads one JSON job and writes JSON
// to stdout, or CSV for grid commands.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "twomat/applications.hpp"
#include "twomat/averages.hpp"
#include "twomat/errors.hpp"
#include "twomat/io.hpp"
#include "twomat/oracle.hpp"
#include "twomat/verify.hpp"

using namespace twomat;

namespace {

struct Flags {
  std::string job_path;
  std::string out_path;
  bool with_oracle = false;
  std::size_t nodes = kDefaultNodes;
  double tol = 0.0;  // 0: command default
  std::uint64_t seed = 1;
  std::size_t max_order = kDefaultMaxOrder;
};

// Input errors exit 2, failures during computation exit 1.
struct InputFailure {
  json body;
};

[[noreturn]] void input_error(const Error& e, const std::string& location) {
  throw InputFailure{error_json(e.kind(), e.what(), location)};
}

json load_job(const Flags& f, bool required) {
  if (f.job_path.empty()) {
    if (required) throw InputFailure{error_json("usage", "--job FILE is required for this command")};
    return json::object();
  }
  std::string text;
  if (f.job_path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(f.job_path);
    if (!in) throw InputFailure{error_json("io", "cannot open job file", f.job_path)};
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  try {
    return parse_document(text);
  } catch (const ParseError& e) {
    input_error(e, e.location());
  }
}

// Parses the job with input errors mapped to exit status 2.
template <typename F>
auto parse_phase(F&& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    input_error(e, e.location());
  } catch (const ModelError& e) {
    input_error(e, "/model");
  } catch (const Error& e) {
    input_error(e, "");
  }
}

void check_command(const json& job, const std::string& name) {
  if (job.contains("command") && job["command"] != name) {
    throw ParseError("job is for command " + job["command"].dump() + ", not '" + name + "'", "/command");
  }
}

std::size_t required_count(const json& job, const char* key) {
  if (!job.contains(key)) throw ParseError(std::string("missing key '") + key + "'", "");
  return count_from_json(job[key], std::string("/") + key);
}

struct Model {
  ModelSpec spec;
  Discretization rules;
  std::unique_ptr<TransformEvaluator> T;

  Model(const ModelSpec& m, const Flags& f, std::size_t order) : spec(m), rules(make_discretization(m, f.nodes)) {
    T = std::make_unique<TransformEvaluator>(spec, build_system(spec, rules, order, f.max_order), rules);
  }
};

// Buffers CSV so a failure part way through leaves no partial table.
class Output {
 public:
  explicit Output(std::string path) : path_(std::move(path)) { buf_.precision(17); }
  std::ostream& stream() { return buf_; }
  void commit() {
    if (path_.empty()) {
      std::cout << buf_.str();
      return;
    }
    std::ofstream file(path_);
    if (!file) throw InputFailure{error_json("io", "cannot open output file", path_)};
    file << buf_.str();
  }

 private:
  std::string path_;
  std::ostringstream buf_;
};

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

int run_biorth(const Flags& f) {
  const json job = load_job(f, true);
  const auto [model, N] = parse_phase([&] {
    check_command(job, "biorth");
    require_keys(job, {"command", "model", "N"}, "");
    if (!job.contains("model")) throw ParseError("missing key 'model'", "");
    return std::make_pair(model_from_json(job["model"]), required_count(job, "N"));
  });
  const auto sys = build_system(model, make_discretization(model, f.nodes), N, f.max_order);
  print(to_json(sys));
  if (!f.out_path.empty()) {
    Output out(f.out_path);
    write_h_sq_csv(out.stream(), sys);
    out.commit();
  }
  return 0;
}

int run_avg(const Flags& f) {
  const json job = load_job(f, true);
  struct Parsed {
    ModelSpec model;
    std::size_t n;
    SourceConfig cfg;
    AverageOptions opts;
  };
  const Parsed p = parse_phase([&] {
    check_command(job, "avg");
    require_keys(job, {"command", "model", "n", "xs", "ys", "vs", "ws", "p_shift", "orientation"}, "");
    if (!job.contains("model")) throw ParseError("missing key 'model'", "");
    Parsed out{model_from_json(job["model"]), required_count(job, "n"), sources_from_json(job), {}};
    if (job.contains("p_shift")) {
      if (!job["p_shift"].is_number_integer()) throw ParseError("expected an integer", "/p_shift");
      out.opts.p_shift = job["p_shift"].get<int>();
    }
    if (job.contains("orientation")) {
      const auto& o = job["orientation"];
      if (o == "a") {
        out.opts.orientation = Orientation::a;
      } else if (o == "b") {
        out.opts.orientation = Orientation::b;
      } else if (o != "auto") {
        throw ParseError("orientation must be \"a\", \"b\" or \"auto\"", "/orientation");
      }
    }
    return out;
  });
  const auto order = static_cast<std::size_t>(std::max(1, required_order(p.n, p.cfg)));
  const Model m(p.model, f, order);
  const AverageResult r = average(*m.T, p.n, p.cfg, p.opts);
  std::optional<cplx> oracle;
  if (f.with_oracle) oracle = BruteForceOracle(p.model, f.nodes).average(p.n, p.cfg);
  print(to_json(r, oracle));
  return 0;
}

int run_kernels(const Flags& f) {
  const json job = load_job(f, true);
  struct Parsed {
    ModelSpec model;
    std::size_t n = 0;
    std::string kernel;
    std::size_t index = 0;
    std::vector<cplx> a1, a2;
  };
  static const std::vector<std::string> transforms = {"P", "Q", "P_tilde", "Q_tilde"};
  static const std::vector<std::string> kernels = {"K11",       "K12",       "K21",       "K22",     "K11_tilde",
                                                   "K12_tilde", "K21_tilde", "K22_tilde", "K11_hat", "K22_hat"};
  const Parsed p = parse_phase([&] {
    check_command(job, "kernels");
    require_keys(job, {"command", "model", "n", "kernel", "index", "args1", "args2"}, "");
    if (!job.contains("model")) throw ParseError("missing key 'model'", "");
    Parsed out;
    out.model = model_from_json(job["model"]);
    if (!job.contains("kernel") || !job["kernel"].is_string()) throw ParseError("expected a kernel name", "/kernel");
    out.kernel = job["kernel"].get<std::string>();
    const bool is_transform = std::find(transforms.begin(), transforms.end(), out.kernel) != transforms.end();
    const bool is_hat = out.kernel == "K11_hat" || out.kernel == "K22_hat";
    if (!is_transform && std::find(kernels.begin(), kernels.end(), out.kernel) == kernels.end()) {
      throw ParseError("unknown kernel '" + out.kernel + "'", "/kernel");
    }
    if (!job.contains("args1")) throw ParseError("missing key 'args1'", "");
    out.a1 = grid_from_json(job["args1"], "/args1");
    if (is_transform) {
      out.index = required_count(job, "index");
    } else {
      out.n = required_count(job, "n");
      if (!is_hat) {
        if (!job.contains("args2")) throw ParseError("missing key 'args2'", "");
        out.a2 = grid_from_json(job["args2"], "/args2");
      }
    }
    const bool plain = out.kernel.size() == 3 || out.kernel == "P" || out.kernel == "Q";
    if (plain) {
      for (const auto* list : {&out.a1, &out.a2}) {
        for (cplx z : *list) {
          if (z.imag() != 0.0)
            throw ParseError(out.kernel + " takes real arguments", list == &out.a1 ? "/args1" : "/args2");
        }
      }
    }
    return out;
  });

  const bool is_transform = std::find(transforms.begin(), transforms.end(), p.kernel) != transforms.end();
  const Model m(p.model, f, is_transform ? std::max<std::size_t>(p.index, 1) : std::max<std::size_t>(p.n, 1));
  const TransformEvaluator& T = *m.T;
  Output out(f.out_path);
  std::ostream& os = out.stream();
  if (is_transform) {
    os << "index,re_arg,im_arg,re_val,im_val\n";
    for (cplx z : p.a1) {
      cplx v;
      if (p.kernel == "P") v = T.P(p.index, z.real());
      if (p.kernel == "Q") v = T.Q(p.index, z.real());
      if (p.kernel == "P_tilde") v = T.P_tilde(p.index, z);
      if (p.kernel == "Q_tilde") v = T.Q_tilde(p.index, z);
      os << p.index << ',' << z.real() << ',' << z.imag() << ',' << v.real() << ',' << v.imag() << '\n';
    }
    out.commit();
    return 0;
  }
  const KernelContext C(T, p.n);
  os << "kernel,n,re_arg1,im_arg1,re_arg2,im_arg2,re_val,im_val\n";
  auto row = [&](cplx a, cplx b, cplx v) {
    os << p.kernel << ',' << p.n << ',' << a.real() << ',' << a.imag() << ',' << b.real() << ',' << b.imag() << ','
       << v.real() << ',' << v.imag() << '\n';
  };
  if (p.kernel == "K11_hat" || p.kernel == "K22_hat") {
    for (cplx a : p.a1) row(a, a, p.kernel == "K11_hat" ? C.K11_hat(a) : C.K22_hat(a));
    out.commit();
    return 0;
  }
  for (cplx a : p.a1) {
    for (cplx b : p.a2) {
      cplx v;
      if (p.kernel == "K11") v = C.K11(a.real(), b.real());
      if (p.kernel == "K12") v = C.K12(a.real(), b.real());
      if (p.kernel == "K21") v = C.K21(a.real(), b.real());
      if (p.kernel == "K22") v = C.K22(a.real(), b.real());
      if (p.kernel == "K11_tilde") v = C.K11_tilde(a, b);
      if (p.kernel == "K12_tilde") v = C.K12_tilde(a, b);
      if (p.kernel == "K21_tilde") v = C.K21_tilde(a, b);
      if (p.kernel == "K22_tilde") v = C.K22_tilde(a, b);
      row(a, b, v);
    }
  }
  out.commit();
  return 0;
}

std::vector<int> exponents_from_json(const json& job, const char* key) {
  std::vector<int> out;
  if (!job.contains(key)) return out;
  const std::string where = std::string("/") + key;
  if (!job[key].is_array()) throw ParseError("expected a list of exponents", where);
  for (std::size_t i = 0; i < job[key].size(); ++i) {
    out.push_back(static_cast<int>(count_from_json(job[key][i], where + "/" + std::to_string(i))));
  }
  return out;
}

int run_traces(const Flags& f) {
  const json job = load_job(f, true);
  struct Parsed {
    ModelSpec model;
    std::size_t n;
    std::vector<int> m, p;
  };
  const Parsed p = parse_phase([&] {
    check_command(job, "traces");
    require_keys(job, {"command", "model", "n", "m", "p"}, "");
    if (!job.contains("model")) throw ParseError("missing key 'model'", "");
    return Parsed{model_from_json(job["model"]), required_count(job, "n"), exponents_from_json(job, "m"),
                  exponents_from_json(job, "p")};
  });
  const Model m(p.model, f, std::max<std::size_t>(p.n, 1));
  const KernelContext C(*m.T, p.n);
  ContourOptions co;
  if (f.tol > 0.0) co.doubling_tol = f.tol;
  const TraceResult r = trace_product_average(C, p.m, p.p, co);
  const double o = BruteForceOracle(p.model, f.nodes).trace_moments(p.n, p.m, p.p);
  print({{"m", p.m},
         {"p", p.p},
         {"n", p.n},
         {"value", r.value},
         {"radius", r.radius},
         {"doubling_change", r.doubling_change},
         {"oracle_value", o},
         {"rel_err", std::abs(r.value - o) / std::max(1.0, std::abs(o))}});
  return 0;
}

int run_correlations(const Flags& f) {
  const json job = load_job(f, true);
  struct Parsed {
    ModelSpec model;
    std::size_t n;
    std::vector<cplx> lams, mus;
    bool has_mu;
  };
  const Parsed p = parse_phase([&] {
    check_command(job, "correlations");
    require_keys(job, {"command", "model", "n", "lambda", "mu"}, "");
    if (!job.contains("model")) throw ParseError("missing key 'model'", "");
    Parsed out{model_from_json(job["model"]), required_count(job, "n"), {}, {}, job.contains("mu")};
    if (!job.contains("lambda")) throw ParseError("missing key 'lambda'", "");
    out.lams = grid_from_json(job["lambda"], "/lambda");
    if (out.has_mu) out.mus = grid_from_json(job["mu"], "/mu");
    return out;
  });
  const Model m(p.model, f, std::max<std::size_t>(p.n, 1));
  const KernelContext C(*m.T, p.n);
  Output out(f.out_path);
  std::ostream& os = out.stream();
  if (!p.has_mu) {
    os << "lambda,R\n";
    for (cplx l : p.lams) os << l.real() << ',' << correlation(C, {l.real()}, {}) << '\n';
    out.commit();
    return 0;
  }
  os << "lambda,mu,R\n";
  for (cplx l : p.lams) {
    for (cplx u : p.mus) os << l.real() << ',' << u.real() << ',' << correlation(C, {l.real()}, {u.real()}) << '\n';
  }
  out.commit();
  return 0;
}

int run_verify_cmd(const Flags& f) {
  const json job = load_job(f, false);
  const auto [model, max_n] = parse_phase([&] {
    check_command(job, "verify");
    require_keys(job, {"command", "model", "max_n"}, "");
    const ModelSpec model = job.contains("model") ? model_from_json(job["model"]) : ModelSpec::gaussian(0.5);
    const std::size_t max_n = job.contains("max_n") ? count_from_json(job["max_n"], "/max_n") : 4;
    return std::make_pair(model, max_n);
  });
  VerifyOptions vo;
  vo.max_n = max_n;
  vo.nodes = f.nodes;
  vo.seed = f.seed;
  if (f.tol > 0.0) vo.tol = f.tol;
  const json report = report_to_json(run_verify(model, vo));
  print(report);
  return report["passed"].get<bool>() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Characteristic-polynomial averages, kernels and correlations of the coupled two-matrix model"};
  app.require_subcommand(1);
  Flags f;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--job", f.job_path, "JSON job file, '-' for stdin");
    sub->add_option("--out", f.out_path, "Output file for CSV results");
    sub->add_flag("--with-oracle", f.with_oracle, "Attach the brute-force oracle value (avg)");
    sub->add_option("--nodes", f.nodes, "Quadrature nodes per axis")->check(CLI::Range(8, 100000));
    sub->add_option("--tol", f.tol, "Check tolerance (verify) or contour doubling tolerance (traces)");
    sub->add_option("--seed", f.seed, "Seed for randomized checks");
    sub->add_option("--max-n", f.max_order, "Largest polynomial order allowed (default 12)");
  };
  std::vector<std::pair<CLI::App*, int (*)(const Flags&)>> subs;
  auto add = [&](const char* name, const char* desc, const char* footer, int (*fn)(const Flags&)) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->footer(footer);
    add_common(sub);
    subs.emplace_back(sub, fn);
  };
  add("biorth", "Biorthogonal polynomial coefficients and norms",
      "Job: {\"model\": {\"V\": [...], \"W\": [...], \"tau\": t}, \"N\": order}\n"
      "Stdout: {\"N\", \"p\", \"q\", \"h_sq\"}. --out writes CSV columns n,h_sq.",
      run_biorth);
  add("avg", "Average of a ratio of characteristic polynomials",
      "Job: {\"model\", \"n\", \"xs\", \"ys\", \"vs\", \"ws\" (lists of [re, im]), \"p_shift\"?, \"orientation\"?: "
      "a|b|auto}\n"
      "Stdout: {\"value\", \"formula_used\", \"p_index_used\", \"condition_estimate\", \"oracle_value\"?, "
      "\"rel_err\"?}",
      run_avg);
  add("kernels", "Tabulate kernels or transformed functions on a grid",
      "Job: {\"model\", \"kernel\", \"n\", \"index\", \"args1\", \"args2\"}. A grid is [[re, im], ...] or\n"
      "{\"min\", \"max\", \"count\"}. Kernels K11..K22 (real), K11_tilde..K22_tilde, K11_hat, K22_hat:\n"
      "CSV columns kernel,n,re_arg1,im_arg1,re_arg2,im_arg2,re_val,im_val over args1 x args2.\n"
      "P, Q (real), P_tilde, Q_tilde at \"index\": CSV columns index,re_arg,im_arg,re_val,im_val over args1.",
      run_kernels);
  add("traces", "Average of a product of traces, with the oracle comparison",
      "Job: {\"model\", \"n\", \"m\": [exponents of M1], \"p\": [exponents of M2]}\n"
      "Stdout: {\"value\", \"radius\", \"doubling_change\", \"oracle_value\", \"rel_err\"}",
      run_traces);
  add("correlations", "Correlation functions on a grid",
      "Job: {\"model\", \"n\", \"lambda\": grid, \"mu\"?: grid}\n"
      "CSV columns lambda,mu,R (R_{1,1}) or lambda,R (R_{1,0} when mu is absent).",
      run_correlations);
  add("verify", "Run the property and oracle checks",
      "Job (optional): {\"model\", \"max_n\"}; defaults to V = W = x^2/2, tau = 0.5, max_n = 4.\n"
      "Stdout: {\"passed\", \"checks\": [{\"name\", \"passed\", \"residual\", \"tolerance\", \"detail\"}]}.\n"
      "Exit status 0 iff every check passes.",
      run_verify_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print(error_json("usage", e.what()));
    return 2;
  }

  try {
    for (const auto& [sub, fn] : subs) {
      if (sub->parsed()) return fn(f);
    }
  } catch (const InputFailure& e) {
    print(e.body);
    return 2;
  } catch (const Error& e) {
    print(error_json(e.kind(), e.what()));
    return 1;
  } catch (const std::exception& e) {
    print(error_json("internal", e.what()));
    return 1;
  }
  return 1;
}
