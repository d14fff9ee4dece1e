#include "sebd/sweep.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "json.hpp"
#include "sebd/geometry.hpp"
#include "sebd/rng.hpp"

namespace sebd {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct MeanSe {
    double mean = std::numeric_limits<double>::quiet_NaN();
    double se = std::numeric_limits<double>::quiet_NaN();
};

MeanSe mean_se(const std::vector<double>& xs) {
    MeanSe r;
    if (xs.empty()) return r;
    double s = 0.0;
    for (double x : xs) s += x;
    r.mean = s / double(xs.size());
    if (xs.size() < 2) {
        r.se = 0.0;
        return r;
    }
    double ss = 0.0;
    for (double x : xs) ss += (x - r.mean) * (x - r.mean);
    r.se = std::sqrt(ss / (double(xs.size()) * double(xs.size() - 1)));
    return r;
}

void write_text_file(const fs::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << body;
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

double parse_double(const std::string& s) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw std::runtime_error("bad numeric field '" + s + "'");
    return v;
}

int64_t parse_int(const std::string& s) {
    char* end = nullptr;
    long long v = std::strtoll(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0') throw std::runtime_error("bad integer field '" + s + "'");
    return v;
}

// Rows of a CSV file, header checked, each row split into `cols` fields.
std::vector<std::vector<std::string>> read_csv(const fs::path& path, const std::string& header,
                                               size_t cols) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != header)
        throw std::runtime_error("unexpected header in " + path.string());
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto fields = split_fields(line);
        if (fields.size() != cols) throw std::runtime_error("malformed row in " + path.string());
        rows.push_back(std::move(fields));
    }
    return rows;
}

std::string histogram_csv(const Histogram& hist, const char* label) {
    std::string body = std::string(label) + ",mass,count\n";
    for (const auto& [bin, mass] : hist.mass) {
        body += std::to_string(bin);
        body += ',';
        body += format_double(mass);
        body += ',';
        body += std::to_string(std::llround(mass * double(hist.total_count)));
        body += '\n';
    }
    return body;
}

Histogram histogram_from_csv(const fs::path& path, const std::string& header) {
    Histogram hist;
    for (const auto& row : read_csv(path, header, 3)) {
        hist.mass[parse_int(row[0])] = parse_double(row[1]);
        hist.total_count += uint64_t(parse_int(row[2]));
    }
    return hist;
}

double json_double(const json& v) {
    return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
}

}  // namespace

void SweepConfig::validate() const {
    if (Ls.empty() || Ws.empty() || Ts.empty() || ps.empty())
        throw std::invalid_argument("sweep grids must be non-empty");
    for (uint32_t v : Ls)
        if (v < 2) throw std::invalid_argument("sweep L values must be >= 2");
    for (uint32_t v : Ws)
        if (v < 2) throw std::invalid_argument("sweep W values must be >= 2");
    for (uint32_t v : Ts)
        if (v == 0) throw std::invalid_argument("sweep T values must be positive");
    for (double q : ps)
        if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("sweep p values must lie in [0, 1]");
    if (n_realizations == 0) throw std::invalid_argument("n_realizations must be >= 1");
    const uint32_t min_l = *std::min_element(Ls.begin(), Ls.end());
    for (uint32_t dc : cmi_buffers)
        if (dc + 2 > min_l)
            throw std::invalid_argument("cmi buffer leaves no rows for the outer parts");
}

uint64_t trajectory_seed(uint64_t master_seed, uint32_t L, uint32_t W, uint32_t T, double p,
                         uint32_t realization) {
    return derive_seed(master_seed, L, W, T, std::bit_cast<uint64_t>(p), realization);
}

int resolve_threads(int requested) {
    if (const char* env = std::getenv("SEBD_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return int(v);
    }
    if (requested >= 1) return requested;
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

BatchResult run_batch(uint32_t L, uint32_t W, uint32_t T, double p, uint64_t master_seed,
                      uint32_t n, const std::vector<uint32_t>& cmi_buffers,
                      const CutoffPolicy* cutoff, int threads) {
    const int nt = resolve_threads(threads);
    std::vector<TrajectoryRecord> recs(n);
    std::vector<uint8_t> ok(n, 0);
    auto run_one = [&](uint32_t r) {
        // Failures are recorded, never fatal to the batch.
        try {
            const uint64_t seed = trajectory_seed(master_seed, L, W, T, p, r);
            CircuitGeometry geom(L, W, T, derive_seed(seed, 0));
            recs[r] = cutoff ? run_trajectory_with_cutoff(geom, p, seed, *cutoff, cmi_buffers)
                             : run_trajectory(geom, p, seed, cmi_buffers);
            ok[r] = 1;
        } catch (const std::exception&) {
        }
    };
    if (nt == 1) {
        for (uint32_t r = 0; r < n; ++r) run_one(r);
    } else {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(nt)
#endif
        for (int64_t r = 0; r < int64_t(n); ++r) run_one(uint32_t(r));
    }
    BatchResult out;
    out.records.reserve(n);
    for (uint32_t r = 0; r < n; ++r) {
        if (ok[r])
            out.records.push_back(std::move(recs[r]));
        else
            ++out.n_failed;
    }
    return out;
}

std::pair<Histogram, Histogram> aggregate_histograms(const std::vector<TrajectoryRecord>& records) {
    if (records.empty()) throw std::invalid_argument("aggregate_histograms: empty record stream");
    const TrajectoryRecord& front = records.front();
    std::map<int64_t, uint64_t> c_counts, d_counts;
    uint64_t total = 0;
    for (const TrajectoryRecord& rec : records) {
        if (rec.L != front.L || rec.W != front.W || rec.T != front.T || rec.p != front.p)
            throw std::invalid_argument("aggregate_histograms: mixed-parameter record stream");
        for (const GenStat& gs : rec.gen_stats_at_peak) {
            ++c_counts[std::llround(std::ceil(gs.com))];
            ++d_counts[int64_t(gs.len)];
            ++total;
        }
    }
    std::pair<Histogram, Histogram> out;
    out.first.total_count = out.second.total_count = total;
    for (const auto& [bin, count] : c_counts) out.first.mass[bin] = double(count) / double(total);
    for (const auto& [bin, count] : d_counts) out.second.mass[bin] = double(count) / double(total);
    return out;
}

std::vector<CmiPoint> cmi_profile(const std::vector<TrajectoryRecord>& records,
                                  const std::vector<uint32_t>& d_c_list) {
    std::vector<CmiPoint> out;
    out.reserve(d_c_list.size());
    std::vector<double> vals;
    for (uint32_t dc : d_c_list) {
        vals.clear();
        for (const TrajectoryRecord& rec : records) {
            auto it = std::find_if(rec.cmi_at_peak.begin(), rec.cmi_at_peak.end(),
                                   [dc](const std::pair<uint32_t, double>& e) { return e.first == dc; });
            if (it == rec.cmi_at_peak.end())
                throw std::invalid_argument("cmi_profile: record lacks requested buffer size");
            vals.push_back(it->second);
        }
        const MeanSe ms = mean_se(vals);
        out.push_back({dc, ms.mean, ms.se, uint32_t(vals.size())});
    }
    return out;
}

PointAggregate aggregate_point(uint32_t L, uint32_t W, uint32_t T, double p, uint32_t n_requested,
                               const BatchResult& batch, const std::vector<uint32_t>& cmi_buffers,
                               const std::optional<CutoffPolicy>& cutoff) {
    PointAggregate a;
    a.L = L;
    a.W = W;
    a.T = T;
    a.p = p;
    a.n_requested = n_requested;
    a.n_failed = batch.n_failed;

    std::vector<TrajectoryRecord> completed;
    for (const TrajectoryRecord& rec : batch.records) {
        if (rec.aborted)
            ++a.n_aborted;
        else
            completed.push_back(rec);
    }
    a.n_completed = uint32_t(completed.size());
    const uint32_t n_eff = a.n_completed + a.n_aborted;
    a.abort_fraction = n_eff ? double(a.n_aborted) / double(n_eff) : 0.0;
    if (cutoff) a.tvd_bound = double(n_eff) * double(T) * std::exp(-cutoff->lambda);

    const MeanSe nothing;
    a.mean_peak = nothing.mean;
    a.se_peak = nothing.se;
    a.mean_t_peak = a.mean_m_over_n = a.mean_w_b = nothing.mean;
    if (completed.empty()) return a;

    std::vector<double> tmp(completed.size());
    a.mean_s_op.resize(W);
    a.se_s_op.resize(W);
    for (uint32_t t = 0; t < W; ++t) {
        for (size_t i = 0; i < completed.size(); ++i) tmp[i] = double(completed[i].s_op_curve.at(t));
        const MeanSe ms = mean_se(tmp);
        a.mean_s_op[t] = ms.mean;
        a.se_s_op[t] = ms.se;
    }
    auto scalar = [&](auto&& get) {
        for (size_t i = 0; i < completed.size(); ++i) tmp[i] = get(completed[i]);
        return mean_se(tmp);
    };
    const MeanSe peak = scalar([](const TrajectoryRecord& r) { return double(r.s_op_peak); });
    a.mean_peak = peak.mean;
    a.se_peak = peak.se;
    a.mean_t_peak = scalar([](const TrajectoryRecord& r) { return double(r.t_peak + 1); }).mean;
    a.mean_m_over_n = scalar([](const TrajectoryRecord& r) { return r.m_over_n_at_peak; }).mean;
    a.mean_w_b = scalar([](const TrajectoryRecord& r) { return double(r.w_b_at_peak); }).mean;

    std::tie(a.hist_c, a.hist_d) = aggregate_histograms(completed);
    if (!cmi_buffers.empty()) a.cmi = cmi_profile(completed, cmi_buffers);
    return a;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string point_dir_name(uint32_t L, uint32_t W, uint32_t T, double p) {
    return "L" + std::to_string(L) + "_W" + std::to_string(W) + "_T" + std::to_string(T) + "_p" +
           format_double(p);
}

void write_point_aggregate(const std::string& dir, const PointAggregate& agg) {
    const fs::path base(dir);
    fs::create_directories(base);

    std::string curve = "t,mean_s_op,stderr\n";
    for (size_t t = 0; t < agg.mean_s_op.size(); ++t) {
        curve += std::to_string(t + 1);
        curve += ',';
        curve += format_double(agg.mean_s_op[t]);
        curve += ',';
        curve += format_double(agg.se_s_op[t]);
        curve += '\n';
    }
    write_text_file(base / "curve.csv", curve);
    write_text_file(base / "hist_c.csv", histogram_csv(agg.hist_c, "x_c"));
    write_text_file(base / "hist_d.csv", histogram_csv(agg.hist_d, "len"));

    std::string cmi = "d_c,mean_cmi,stderr,n\n";
    for (const CmiPoint& pt : agg.cmi) {
        cmi += std::to_string(pt.d_c);
        cmi += ',';
        cmi += format_double(pt.mean);
        cmi += ',';
        cmi += format_double(pt.se);
        cmi += ',';
        cmi += std::to_string(pt.n);
        cmi += '\n';
    }
    write_text_file(base / "cmi.csv", cmi);

    json j;
    j["L"] = agg.L;
    j["W"] = agg.W;
    j["T"] = agg.T;
    j["p"] = agg.p;
    j["n_requested"] = agg.n_requested;
    j["n_completed"] = agg.n_completed;
    j["n_aborted"] = agg.n_aborted;
    j["n_failed"] = agg.n_failed;
    j["mean_peak"] = agg.mean_peak;
    j["se_peak"] = agg.se_peak;
    j["mean_t_peak"] = agg.mean_t_peak;
    j["mean_m_over_n"] = agg.mean_m_over_n;
    j["mean_w_b"] = agg.mean_w_b;
    j["n_g"] = agg.hist_d.total_count;
    j["abort_fraction"] = agg.abort_fraction;
    j["tvd_bound"] = agg.tvd_bound;
    write_text_file(base / "point.json", j.dump(2) + "\n");
}

PointAggregate read_point_aggregate(const std::string& dir) {
    const fs::path base(dir);
    PointAggregate a;
    json j;
    try {
        j = json::parse(read_text_file(base / "point.json"));
        a.L = j.at("L").get<uint32_t>();
        a.W = j.at("W").get<uint32_t>();
        a.T = j.at("T").get<uint32_t>();
        a.p = j.at("p").get<double>();
        a.n_requested = j.at("n_requested").get<uint32_t>();
        a.n_completed = j.at("n_completed").get<uint32_t>();
        a.n_aborted = j.at("n_aborted").get<uint32_t>();
        a.n_failed = j.at("n_failed").get<uint32_t>();
        a.mean_peak = json_double(j.at("mean_peak"));
        a.se_peak = json_double(j.at("se_peak"));
        a.mean_t_peak = json_double(j.at("mean_t_peak"));
        a.mean_m_over_n = json_double(j.at("mean_m_over_n"));
        a.mean_w_b = json_double(j.at("mean_w_b"));
        a.abort_fraction = json_double(j.at("abort_fraction"));
        a.tvd_bound = json_double(j.at("tvd_bound"));
    } catch (const json::exception& e) {
        throw std::runtime_error("bad point.json in " + dir + ": " + e.what());
    }
    for (const auto& row : read_csv(base / "curve.csv", "t,mean_s_op,stderr", 3)) {
        if (parse_int(row[0]) != int64_t(a.mean_s_op.size()) + 1)
            throw std::runtime_error("non-contiguous curve.csv in " + dir);
        a.mean_s_op.push_back(parse_double(row[1]));
        a.se_s_op.push_back(parse_double(row[2]));
    }
    a.hist_c = histogram_from_csv(base / "hist_c.csv", "x_c,mass,count");
    a.hist_d = histogram_from_csv(base / "hist_d.csv", "len,mass,count");
    // The CSV carries per-bin counts; the pooled total is their sum.
    if (!a.hist_c.mass.empty() && a.hist_c.total_count != a.hist_d.total_count)
        throw std::runtime_error("inconsistent histogram totals in " + dir);
    for (const auto& row : read_csv(base / "cmi.csv", "d_c,mean_cmi,stderr,n", 4)) {
        CmiPoint pt;
        pt.d_c = uint32_t(parse_int(row[0]));
        pt.mean = parse_double(row[1]);
        pt.se = parse_double(row[2]);
        pt.n = uint32_t(parse_int(row[3]));
        a.cmi.push_back(pt);
    }
    return a;
}

SweepResult run_sweep(const SweepConfig& config) {
    config.validate();
    if (config.out_dir.empty()) throw std::invalid_argument("run_sweep: output directory required");
    const int threads = resolve_threads(config.threads);
    fs::create_directories(config.out_dir);

    SweepResult result;
    for (uint32_t L : config.Ls)
        for (uint32_t W : config.Ws)
            for (uint32_t T : config.Ts)
                for (double p : config.ps) {
                    BatchResult batch =
                        run_batch(L, W, T, p, config.master_seed, config.n_realizations,
                                  config.cmi_buffers, config.cutoff ? &*config.cutoff : nullptr,
                                  threads);
                    PointAggregate agg = aggregate_point(L, W, T, p, config.n_realizations, batch,
                                                         config.cmi_buffers, config.cutoff);
                    const std::string name = point_dir_name(L, W, T, p);
                    const fs::path dir = fs::path(config.out_dir) / name;
                    write_point_aggregate(dir.string(), agg);
                    if (config.dump_records) {
                        std::string body;
                        for (const TrajectoryRecord& rec : batch.records) {
                            body += record_to_json_line(rec);
                            body += '\n';
                        }
                        write_text_file(dir / "records.jsonl", body);
                    }
                    result.points.push_back(std::move(agg));
                    result.point_dirs.push_back(name);
                }

    // The manifest echoes the experiment identity only; runtime knobs (threads,
    // record dumping, the directory itself) must not affect output bytes.
    json manifest;
    manifest["schema_version"] = 1;
    manifest["Ls"] = config.Ls;
    manifest["Ws"] = config.Ws;
    manifest["Ts"] = config.Ts;
    manifest["ps"] = config.ps;
    manifest["n_realizations"] = config.n_realizations;
    manifest["master_seed"] = config.master_seed;
    manifest["cmi_buffers"] = config.cmi_buffers;
    manifest["ell0"] = config.ell0;
    if (config.cutoff) {
        manifest["cutoff"] = {{"lambda", config.cutoff->lambda},
                              {"eta", config.cutoff->eta},
                              {"epsilon", config.cutoff->epsilon}};
    }
    manifest["points"] = result.point_dirs;
    write_text_file(fs::path(config.out_dir) / "sweep.json", manifest.dump(2) + "\n");
    return result;
}

}  // namespace sebd
