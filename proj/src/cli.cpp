#include "sebd/cli.hpp"

#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sebd/analyze.hpp"
#include "sebd/clipped.hpp"
#include "sebd/fits.hpp"
#include "sebd/geometry.hpp"
#include "sebd/reference.hpp"
#include "sebd/rng.hpp"
#include "sebd/sebd.hpp"
#include "sebd/sweep.hpp"

namespace sebd {
namespace {

using nlohmann::json;

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {"L",   "W",    "T",       "p",     "n",  "seed",
                                               "ell0", "lambda", "eta",  "epsilon", "out",
                                               "threads", "d_c", "gamma", "wb",   "dc",
                                               "bootstrap"};
    return keys;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    auto trim = [](const std::string& s) {
        const char* ws = " \t\r";
        const size_t a = s.find_first_not_of(ws);
        if (a == std::string::npos) return std::string();
        return s.substr(a, s.find_last_not_of(ws) - a + 1);
    };
    std::map<std::string, std::string> kv;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(t.substr(0, eq));
        if (!known_keys().count(key))
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unknown key '" + key +
                                     "'");
        kv[key] = trim(t.substr(eq + 1));
    }
    return kv;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> parts;
    size_t start = 0;
    while (true) {
        const size_t comma = s.find(',', start);
        if (comma == std::string::npos) {
            parts.push_back(s.substr(start));
            return parts;
        }
        parts.push_back(s.substr(start, comma - start));
        start = comma + 1;
    }
}

uint64_t to_u64(const std::string& key, const std::string& s) {
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (s.empty() || s[0] == '-' || end == s.c_str() || *end != '\0' || errno == ERANGE)
        throw std::invalid_argument("invalid value '" + s + "' for --" + key);
    return v;
}

uint32_t to_u32(const std::string& key, const std::string& s) {
    const uint64_t v = to_u64(key, s);
    if (v > UINT32_MAX) throw std::invalid_argument("value '" + s + "' too large for --" + key);
    return uint32_t(v);
}

double to_real(const std::string& key, const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end == s.c_str() || *end != '\0')
        throw std::invalid_argument("invalid value '" + s + "' for --" + key);
    return v;
}

// Final resolved option values (defaults < flags < config file).
struct Opts {
    const std::map<std::string, std::string>& kv;

    bool has(const std::string& k) const { return kv.count(k) != 0; }
    const std::string& raw(const std::string& k) const { return kv.at(k); }
    const std::string& raw_req(const std::string& k, const char* cmd) const {
        if (!has(k)) throw std::invalid_argument(std::string(cmd) + ": --" + k + " is required");
        return kv.at(k);
    }
    uint64_t u64_or(const std::string& k, uint64_t def) const {
        return has(k) ? to_u64(k, raw(k)) : def;
    }
    uint32_t u32_req(const std::string& k, const char* cmd) const {
        return to_u32(k, raw_req(k, cmd));
    }
    uint32_t u32_or(const std::string& k, uint32_t def) const {
        return has(k) ? to_u32(k, raw(k)) : def;
    }
    double real_req(const std::string& k, const char* cmd) const {
        return to_real(k, raw_req(k, cmd));
    }
    double real_or(const std::string& k, double def) const {
        return has(k) ? to_real(k, raw(k)) : def;
    }
    std::vector<uint32_t> u32_list_req(const std::string& k, const char* cmd) const {
        std::vector<uint32_t> out;
        for (const std::string& part : split_list(raw_req(k, cmd))) out.push_back(to_u32(k, part));
        return out;
    }
    std::vector<uint32_t> u32_list_or(const std::string& k) const {
        return has(k) ? u32_list_req(k, "") : std::vector<uint32_t>{};
    }
    std::vector<double> real_list_req(const std::string& k, const char* cmd) const {
        std::vector<double> out;
        for (const std::string& part : split_list(raw_req(k, cmd))) out.push_back(to_real(k, part));
        return out;
    }
};

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << body;
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + path);
}

CutoffPolicy policy_from(const Opts& o, const char* cmd) {
    CutoffPolicy pol;
    pol.lambda = o.real_req("lambda", cmd);
    pol.eta = o.real_or("eta", pol.eta);
    pol.epsilon = o.real_or("epsilon", pol.epsilon);
    return pol;
}

int cmd_run(const Opts& o, std::ostream& out) {
    const uint32_t L = o.u32_req("L", "run");
    const uint32_t W = o.u32_req("W", "run");
    const uint32_t T = o.u32_req("T", "run");
    const double p = o.real_or("p", 0.0);
    const uint64_t seed = o.u64_or("seed", 0);
    const std::vector<uint32_t> d_c = o.u32_list_or("d_c");
    const CircuitGeometry geom(L, W, T, derive_seed(seed, 0));
    const TrajectoryRecord rec =
        o.has("lambda") ? run_trajectory_with_cutoff(geom, p, seed, policy_from(o, "run"), d_c)
                        : run_trajectory(geom, p, seed, d_c);
    const std::string line = record_to_json_line(rec) + "\n";
    out << line;
    if (o.has("out")) write_file(o.raw("out"), line);
    return 0;
}

int cmd_sweep(const Opts& o, std::ostream& out) {
    SweepConfig cfg;
    cfg.Ls = o.u32_list_req("L", "sweep");
    cfg.Ws = o.u32_list_req("W", "sweep");
    cfg.Ts = o.u32_list_req("T", "sweep");
    cfg.ps = o.real_list_req("p", "sweep");
    cfg.n_realizations = o.u32_or("n", 1000);
    cfg.master_seed = o.u64_or("seed", 0);
    cfg.cmi_buffers = o.u32_list_or("d_c");
    cfg.ell0 = o.u32_or("ell0", 10);
    cfg.out_dir = o.raw_req("out", "sweep");
    cfg.threads = int(o.u32_or("threads", 0));
    if (o.has("lambda")) cfg.cutoff = policy_from(o, "sweep");
    const SweepResult res = run_sweep(cfg);
    out << "wrote " << cfg.out_dir << "/sweep.json with " << res.points.size()
        << " grid points\n";
    return 0;
}

int cmd_analyze(const std::string& dir, const Opts& o, std::ostream& out) {
    std::optional<uint32_t> ell0;
    if (o.has("ell0")) ell0 = o.u32_req("ell0", "analyze");
    const FitResults fits = analyze_sweep(dir, ell0, o.real_or("eta", 21.3), o.u32_or("bootstrap", 0));
    const std::string body = fit_results_to_json(fits);
    out << body;
    write_file(o.has("out") ? o.raw("out") : dir + "/fits.json", body);
    return 0;
}

int cmd_predict(const Opts& o, std::ostream& out) {
    const double eta = o.real_or("eta", 21.3);
    const std::optional<uint32_t> T =
        o.has("T") ? std::optional<uint32_t>(o.u32_req("T", "predict")) : std::nullopt;
    const std::optional<double> p =
        o.has("p") ? std::optional<double>(o.real_req("p", "predict")) : std::nullopt;
    std::optional<double> gamma;
    if (o.has("gamma"))
        gamma = o.real_req("gamma", "predict");
    else if (T && p && *p > 0.0)
        gamma = eta * *p / double(*T);
    else
        throw std::invalid_argument("predict: need --gamma, or --p > 0 together with --T");

    json j;
    j["gamma"] = *gamma;
    j["s_max"] = predict_s_max(*gamma);
    if (o.has("dc")) {
        uint32_t w_b = 0;
        if (o.has("wb"))
            w_b = o.u32_req("wb", "predict");
        else if (T)
            w_b = *T / 2 + 1;
        else
            throw std::invalid_argument("predict: --dc needs --wb or --T");
        json cmi = json::object();
        for (uint32_t dc : o.u32_list_req("dc", "predict"))
            cmi[std::to_string(dc)] = predict_cmi(*gamma, w_b, dc);
        j["w_b"] = w_b;
        j["cmi"] = cmi;
    }
    if (o.has("lambda")) {
        if (!T) throw std::invalid_argument("predict: --lambda needs --T");
        CutoffPolicy pol = policy_from(o, "predict");
        pol.eta = eta;
        const CutoffEvaluation ev =
            evaluate_cutoff_policy(pol, o.u64_or("n", 1000), *T, p.value_or(0.0));
        j["cutoff"] = {{"chi_cutoff_log2", ev.chi_cutoff_log2},
                       {"tvd_bound", ev.tvd_bound},
                       {"lambda_global", ev.lambda_global},
                       {"lambda_per_column", ev.lambda_per_column}};
    }
    out << j.dump(2) << "\n";
    return 0;
}

int cmd_validate(std::ostream& out) {
    int failures = 0;
    const auto check = [&](const char* name, bool passed) {
        out << (passed ? "PASS " : "FAIL ") << name << "\n";
        if (!passed) ++failures;
    };
    const auto guarded = [](auto&& fn) -> bool {
        try {
            return fn();
        } catch (const std::exception&) {
            return false;
        }
    };

    check("strip sampling matches the full-lattice reference", guarded([] {
              for (double p : {0.0, 0.3})
                  for (uint64_t seed = 1; seed <= 5; ++seed) {
                      const CircuitGeometry geom(4, 4, 4, derive_seed(seed, 77));
                      if (run_trajectory(geom, p, seed).bits != sample_full_lattice(geom, p, seed))
                          return false;
                  }
              return true;
          }));

    check("crossing count equals the boundary mutual information", guarded([] {
              const CircuitGeometry geom(4, 6, 4, 5);
              BoundaryStrip strip(geom, 11, 12);
              for (uint32_t t = 0; t < geom.num_cols(); ++t) {
                  const int s = strip.advance(t, 0.2);
                  const uint32_t w = strip.width();
                  std::vector<uint32_t> a, b;
                  for (uint32_t q = 0; q < 4 * w; ++q) (q < 2 * w ? a : b).push_back(q);
                  if (std::abs(mutual_information(strip.tableau(), a, b) - double(s)) > 1e-9)
                      return false;
                  if (operator_entanglement(to_clipped_gauge(strip.tableau()), 2 * w) != s)
                      return false;
                  strip.measure_column(t);
              }
              return true;
          }));

    check("fit routines recover exact planted parameters", guarded([] {
              const LinearFit lf = fit_linear({1, 2, 3}, {2, 4, 6});
              if (std::abs(lf.slope - 2.0) > 1e-12 || std::abs(lf.intercept) > 1e-12) return false;
              Histogram h;
              for (int64_t l = 11; l <= 16; ++l) h.mass[l] = std::exp(-0.5 * double(l));
              h.total_count = 1000;
              if (std::abs(fit_exponential_tail(h, 10).gamma - 0.5) > 1e-9) return false;
              const PowerLawFit pf = fit_power_law({0.02, 0.04, 0.08}, {50.0, 25.0, 12.5});
              return std::abs(pf.exponent + 1.0) < 1e-9;
          }));

    check("analytic predictions match their closed forms", guarded([] {
              if (std::abs(predict_s_max(std::log(2.0)) - 1.0) > 1e-12) return false;
              if (std::abs(predict_cmi(0.37, 5, 0) - predict_s_max(0.37)) > 1e-12) return false;
              CutoffPolicy pol;
              pol.lambda = std::log(100.0 * 8.0 / pol.epsilon);
              const CutoffEvaluation ev = evaluate_cutoff_policy(pol, 100, 8, 0.04);
              return std::abs(ev.tvd_bound - pol.epsilon) < 1e-12;
          }));

    check("trajectory records round trip through json lines", guarded([] {
              const CircuitGeometry geom(5, 5, 4, 9);
              const TrajectoryRecord rec = run_trajectory(geom, 0.1, 3, {0, 2});
              const std::string line = record_to_json_line(rec);
              return record_to_json_line(record_from_json_line(line)) == line;
          }));

    return failures == 0 ? 0 : 1;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"SEBD sampler and experiment harness for noisy 2D Clifford circuits"};
    app.require_subcommand(1);

    std::map<std::string, std::string> kv;
    std::string analyze_dir;
    const std::map<std::string, std::string> descs = {
        {"L", "lattice rows (comma list in sweep)"},
        {"W", "lattice columns (comma list in sweep)"},
        {"T", "circuit depth (comma list in sweep)"},
        {"p", "depolarizing rate in [0,1] (comma list in sweep)"},
        {"n", "realizations per grid point / trajectory count in predict"},
        {"seed", "master seed"},
        {"ell0", "length-tail fit threshold"},
        {"lambda", "abort exponent; presence enables the cutoff policy"},
        {"eta", "prefactor of gamma = eta*p/T"},
        {"epsilon", "target TVD accuracy"},
        {"out", "output file (run/analyze) or directory (sweep)"},
        {"config", "key=value file; entries override flags"},
        {"threads", "worker threads; SEBD_THREADS overrides"},
        {"d_c", "comma list of CMI buffer heights to record"},
        {"gamma", "decay exponent for the analytic model"},
        {"wb", "boundary width W_b for CMI predictions"},
        {"dc", "comma list of buffer heights for CMI predictions"},
        {"bootstrap", "parametric-bootstrap resamples for fit standard errors"},
    };
    const auto add_keys = [&](CLI::App* cmd, std::initializer_list<const char*> keys) {
        for (const char* k : keys)
            cmd->add_option_function<std::string>(
                std::string("--") + k,
                [&kv, key = std::string(k)](const std::string& v) { kv[key] = v; },
                descs.at(k));
    };

    CLI::App* c_run = app.add_subcommand("run", "sample one trajectory, print its JSON record");
    add_keys(c_run, {"L", "W", "T", "p", "seed", "lambda", "eta", "epsilon", "out", "d_c",
                     "config"});
    CLI::App* c_sweep = app.add_subcommand("sweep", "run a full parameter sweep");
    add_keys(c_sweep, {"L", "W", "T", "p", "n", "seed", "ell0", "lambda", "eta", "epsilon", "out",
                       "threads", "d_c", "config"});
    CLI::App* c_analyze = app.add_subcommand("analyze", "fit scaling laws over a sweep directory");
    c_analyze->add_option("dir", analyze_dir, "sweep output directory")->required();
    add_keys(c_analyze, {"ell0", "eta", "bootstrap", "out", "config"});
    CLI::App* c_predict = app.add_subcommand("predict", "evaluate the analytic model");
    add_keys(c_predict, {"gamma", "p", "T", "n", "eta", "lambda", "epsilon", "wb", "dc", "config"});
    CLI::App* c_validate =
        app.add_subcommand("validate", "run the built-in oracle and property checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (kv.count("config"))
            for (const auto& [k, v] : parse_config_file(kv.at("config"))) kv[k] = v;
        const Opts o{kv};
        if (c_run->parsed()) return cmd_run(o, out);
        if (c_sweep->parsed()) return cmd_sweep(o, out);
        if (c_analyze->parsed()) return cmd_analyze(analyze_dir, o, out);
        if (c_predict->parsed()) return cmd_predict(o, out);
        if (c_validate->parsed()) return cmd_validate(out);
        err << "error: no subcommand selected\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int cli_main(int argc, const char* const* argv) { return cli_main(argc, argv, std::cout, std::cerr); }

}  // namespace sebd
