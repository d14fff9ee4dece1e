#include "sebd/clipped.hpp"

#include <algorithm>
#include <stdexcept>

#include "sebd/gf2.hpp"

namespace sebd {

namespace {

int local_action(const PauliString& g, uint32_t s) {
    return (g.x(s) ? 1 : 0) | (g.z(s) ? 2 : 0);
}

uint32_t left_end(const PauliString& g) {
    const auto sb = g.support_bounds();
    if (!sb) throw std::logic_error("clipped gauge: generator collapsed to identity");
    return sb->first;
}

uint32_t right_end(const PauliString& g) {
    return g.support_bounds()->second;
}

// Reduces the rows of one endpoint bucket against at most two pivots with
// independent local actions at site s; eliminated rows are handed back for
// re-bucketing at their moved endpoint.
template <typename Rebucket>
void reduce_bucket(std::vector<PauliString>& bucket, uint32_t s, Rebucket rebucket,
                   std::vector<PauliString>& keep) {
    PauliString p1, p2;
    int a1 = 0, a2 = 0;
    for (auto& row : bucket) {
        PauliString g = std::move(row);
        const int a = local_action(g, s);
        if (a1 == 0) {
            a1 = a;
            p1 = std::move(g);
            continue;
        }
        if (a != a1 && a2 == 0) {
            a2 = a;
            p2 = std::move(g);
            continue;
        }
        if (a == a1) {
            g.mul_inplace(p1);
        } else if (a == a2) {
            g.mul_inplace(p2);
        } else {  // a == a1 ^ a2
            g.mul_inplace(p1);
            g.mul_inplace(p2);
        }
        rebucket(std::move(g));  // the local action at s is now zero
    }
    bucket.clear();
    if (a1 != 0) keep.push_back(std::move(p1));
    if (a2 != 0) keep.push_back(std::move(p2));
}

}  // namespace

ClippedGenerators to_clipped_gauge(const MixedTableau& state) {
    const uint32_t n = state.num_qubits();
    ClippedGenerators cg;
    cg.n_sites = n;
    if (state.num_generators() == 0) return cg;

    // Left sweep: ascending sites, buckets keyed by the current left endpoint.
    std::vector<std::vector<PauliString>> buckets(n);
    for (const auto& g : state.generators()) buckets[left_end(g)].push_back(g);
    std::vector<PauliString> swept;
    for (uint32_t s = 0; s < n; ++s)
        reduce_bucket(
            buckets[s], s, [&](PauliString g) { buckets[left_end(g)].push_back(std::move(g)); },
            swept);

    // Right sweep: descending sites, buckets keyed by the current right
    // endpoint. Within a bucket, rows with larger x_l act as pivots so that
    // no multiplication can reach below an eliminated row's left endpoint;
    // equal left endpoints keep theirs because the left sweep made their
    // local actions there independent.
    for (auto& b : buckets) b.clear();
    for (auto& g : swept) buckets[right_end(g)].push_back(std::move(g));
    std::vector<PauliString> rows;
    for (uint32_t s = n; s-- > 0;) {
        std::stable_sort(buckets[s].begin(), buckets[s].end(),
                         [](const PauliString& u, const PauliString& v) {
                             return left_end(u) > left_end(v);
                         });
        reduce_bucket(
            buckets[s], s, [&](PauliString g) { buckets[right_end(g)].push_back(std::move(g)); },
            rows);
    }

    cg.endpoints.reserve(rows.size());
    std::stable_sort(rows.begin(), rows.end(), [](const PauliString& u, const PauliString& v) {
        const auto eu = u.support_bounds(), ev = v.support_bounds();
        return *eu < *ev;
    });
    for (auto& g : rows) {
        const auto sb = g.support_bounds();
        cg.endpoints.emplace_back(sb->first, sb->second);
        cg.rows.push_back(std::move(g));
    }
    return cg;
}

int operator_entanglement(const ClippedGenerators& cg, uint32_t cut) {
    if (cut > cg.n_sites) throw std::invalid_argument("operator_entanglement: cut out of range");
    int crossings = 0;
    for (const auto& [xl, xr] : cg.endpoints) crossings += (xl < cut && cut <= xr);
    return crossings;
}

int cmi_clipped(const ClippedGenerators& cg, const Partition& tri) {
    if (tri.a_end > tri.c_end || tri.c_end > cg.n_sites)
        throw std::invalid_argument("cmi_clipped: blocks out of order");
    int spanning = 0;
    for (const auto& [xl, xr] : cg.endpoints) spanning += (xl < tri.a_end && xr >= tri.c_end);
    return spanning;
}

double entropy_region(const MixedTableau& state, const std::vector<uint32_t>& region) {
    const uint32_t n = state.num_qubits();
    for (size_t i = 0; i < region.size(); ++i) {
        if (region[i] >= n) throw std::invalid_argument("entropy_region: site out of range");
        if (i && region[i] <= region[i - 1])
            throw std::invalid_argument("entropy_region: region must be strictly increasing");
    }
    std::vector<uint32_t> comp;
    comp.reserve(n - region.size());
    for (uint32_t q = 0, j = 0; q < n; ++q) {
        if (j < region.size() && region[j] == q)
            ++j;
        else
            comp.push_back(q);
    }
    const uint32_t m = state.num_generators();
    const uint32_t rank_comp =
        m == 0 ? 0 : Gf2Matrix::restriction(state.generators(), comp).rank();
    const uint32_t m_region = m - rank_comp;  // generators lost by tracing out X
    return static_cast<double>(region.size()) - static_cast<double>(m_region);
}

namespace {

std::vector<uint32_t> merged(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    std::vector<uint32_t> out(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), out.begin());
    for (size_t i = 1; i < out.size(); ++i)
        if (out[i] == out[i - 1]) throw std::invalid_argument("regions overlap");
    return out;
}

}  // namespace

double mutual_information(const MixedTableau& state, const std::vector<uint32_t>& a,
                          const std::vector<uint32_t>& b) {
    const auto ab = merged(a, b);
    return entropy_region(state, a) + entropy_region(state, b) - entropy_region(state, ab);
}

double cmi(const MixedTableau& state, const std::vector<uint32_t>& a,
           const std::vector<uint32_t>& c, const std::vector<uint32_t>& b) {
    const auto ac = merged(a, c);
    const auto cb = merged(c, b);
    const auto acb = merged(ac, b);
    return entropy_region(state, ac) + entropy_region(state, cb) - entropy_region(state, c) -
           entropy_region(state, acb);
}

std::vector<GenStat> generator_stats(const ClippedGenerators& cg) {
    std::vector<GenStat> stats;
    stats.reserve(cg.endpoints.size());
    for (const auto& [xl, xr] : cg.endpoints)
        stats.push_back({(static_cast<double>(xl) + static_cast<double>(xr)) / 2.0 + 1.0,
                         xr - xl});
    return stats;
}

}  // namespace sebd
