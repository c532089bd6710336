#include "wqed/sweep.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <thread>

namespace wqed {

int effective_jobs(int jobs) {
    if (jobs > 0) return jobs;
    if (const char* env = std::getenv("WQED_JOBS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v < 1024) return static_cast<int>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

namespace {

// Work items land in caller-indexed slots, so the result is independent of the
// worker count and scheduling order.
template <class F>
void parallel_for(int n, int jobs, F&& body) {
    int workers = std::min(effective_jobs(jobs), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::mutex err_mtx;
    std::exception_ptr err;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(err_mtx);
                    if (!err) err = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace

std::vector<Branch> sweep_K(const ModelParams& p, const KGrid& grid, double window,
                            int jobs, double omega_cap) {
    if (grid.n < 1) throw std::invalid_argument("sweep_K: grid needs at least one point");
    if (!(grid.k_min > 0.0) || !(grid.k_max < two_pi) || !(grid.k_min <= grid.k_max))
        throw std::invalid_argument("sweep_K: K range must sit inside (0, 2 pi)");

    const int n = grid.n;
    const double step = n > 1 ? (grid.k_max - grid.k_min) / (n - 1) : 1.0;
    std::vector<double> ks(n);
    for (int i = 0; i < n; ++i) ks[i] = grid.k_min + step * i;

    std::vector<std::vector<PairEigenstate>> per_k(n);
    std::vector<char> solved(n, 0);
    parallel_for(n, jobs, [&](int i) {
        if (singular_distance(p.phi, ks[i]) < window) return;
        per_k[i] = solve_states(p, PairMomentum(p, ks[i]));
        solved[i] = 1;
    });

    struct Live {
        Branch br;
        cxd last = 0.0, prev = 0.0;
        double last_k = 0.0;
        int len = 0;
    };
    std::vector<Live> live;
    std::vector<Branch> out;
    int next_id = 1;

    for (int i = 0; i < n; ++i) {
        if (!solved[i]) continue;
        double K = ks[i];
        // retire branches that fell further behind than the extrapolation reach
        for (auto it = live.begin(); it != live.end();) {
            if ((K - it->last_k) / step > 3.5) {
                out.push_back(std::move(it->br));
                it = live.erase(it);
            } else {
                ++it;
            }
        }
        const auto& sts = per_k[i];
        std::vector<char> used(sts.size(), 0);
        for (auto& lv : live) {
            double gap = std::max(1.0, std::round((K - lv.last_k) / step));
            cxd pred = lv.len >= 2 ? lv.last + (lv.last - lv.prev) * gap : lv.last;
            int best = -1;
            double best_score = 0.0;
            for (size_t j = 0; j < sts.size(); ++j) {
                if (used[j]) continue;
                double dist = std::abs(sts[j].omega - pred);
                if (dist >= 0.5 * (1.0 + std::abs(pred))) continue;
                // mild preference for staying in class; crossings still link
                double score =
                    dist * (sts[j].cls == lv.br.points.back().state.cls ? 1.0 : 1.25);
                if (best < 0 || score < best_score) {
                    best = static_cast<int>(j);
                    best_score = score;
                }
            }
            if (best < 0) continue;
            if (std::abs(sts[best].omega) > omega_cap) {
                // the branch ran off toward a divergence; cut it here
                lv.br.capped = true;
                used[best] = 1;
                continue;
            }
            used[best] = 1;
            lv.br.points.push_back({K, sts[best]});
            lv.prev = lv.last;
            lv.last = sts[best].omega;
            lv.last_k = K;
            ++lv.len;
        }
        for (size_t j = 0; j < sts.size(); ++j) {
            if (used[j] || std::abs(sts[j].omega) > omega_cap) continue;
            Live lv;
            lv.br.id = next_id++;
            lv.br.points.push_back({K, sts[j]});
            lv.last = sts[j].omega;
            lv.last_k = K;
            lv.len = 1;
            live.push_back(std::move(lv));
        }
    }
    for (auto& lv : live) out.push_back(std::move(lv.br));
    std::sort(out.begin(), out.end(),
              [](const Branch& a, const Branch& b) { return a.id < b.id; });
    return out;
}

std::vector<std::vector<std::pair<double, cxd>>> resonance_tracks(double phi, double ratio,
                                                                  double K0, double K1,
                                                                  int n, int jobs) {
    if (n < 2) throw std::invalid_argument("resonance_tracks: need n >= 2");
    ModelParams p = ModelParams::from_xi(phi, ratio);
    std::vector<double> ks(n);
    for (int i = 0; i < n; ++i) ks[i] = K0 + (K1 - K0) * i / (n - 1);
    std::vector<std::vector<cxd>> oms(n);
    parallel_for(n, jobs, [&](int i) {
        try {
            for (const auto& s : solve_states(p, PairMomentum(p, ks[i])))
                if (s.cls == StateClass::Resonance) oms[i].push_back(s.omega);
        } catch (const std::exception&) {
            // a sample too close to a singular K contributes no resonances; the
            // track filters below tolerate a few missing grid points
        }
    });

    using Track = std::vector<std::pair<double, cxd>>;
    std::vector<Track> tracks;
    const double reach = (K1 - K0) / n * 1.5 + 1e-12;
    for (int i = 0; i < n; ++i) {
        double K = ks[i];
        std::vector<char> used(oms[i].size(), 0);
        for (auto& tr : tracks) {
            if (std::abs(tr.back().first - K) > reach) continue;
            cxd pred = tr.size() < 2 ? tr.back().second
                                     : 2.0 * tr.back().second - tr[tr.size() - 2].second;
            int bi = -1;
            double best = 0.0;
            for (size_t j = 0; j < oms[i].size(); ++j) {
                if (used[j]) continue;
                double dd = std::abs(oms[i][j] - pred);
                if (bi < 0 || dd < best) {
                    bi = static_cast<int>(j);
                    best = dd;
                }
            }
            if (bi >= 0 && best < 0.5 * (1.0 + std::abs(pred))) {
                tr.emplace_back(K, oms[i][bi]);
                used[bi] = 1;
            }
        }
        for (size_t j = 0; j < oms[i].size(); ++j)
            if (!used[j]) tracks.push_back({{K, oms[i][j]}});
    }
    std::vector<Track> keep;
    for (auto& t : tracks)
        if (2 * static_cast<int>(t.size()) >= n) keep.push_back(std::move(t));
    return keep;
}

std::optional<bool> linked(double phi, double ratio, double K0, double K1, int n,
                           int jobs) {
    auto trs = resonance_tracks(phi, ratio, K0, K1, n, jobs);
    double step = (K1 - K0) / (n - 1);
    using Track = std::vector<std::pair<double, cxd>>;
    std::vector<const Track*> full;
    for (const auto& t : trs)
        // branches diverging at a singular boundary may miss a few grid points
        // at the ends; accept tracks that start close enough and run long enough
        if (std::abs(t.front().first - K0) < 3.5 * step &&
            static_cast<double>(t.size()) >= 0.7 * n)
            full.push_back(&t);
    if (full.size() < 2) return std::nullopt;
    std::stable_sort(full.begin(), full.end(),
                     [](const Track* a, const Track* b) { return a->size() > b->size(); });
    full.resize(2);
    std::stable_sort(full.begin(), full.end(), [](const Track* a, const Track* b) {
        return a->front().second.real() < b->front().second.real();
    });
    cxd end0 = full[0]->back().second, end1 = full[1]->back().second;
    cxd deeper = end0.imag() <= end1.imag() ? end0 : end1;
    return std::abs(end0 - deeper) < 1e-9;  // lower-Re start joins the deeper-Im end?
}

std::vector<std::pair<double, double>> segments(double phi) {
    const double m = 0.005 * pi;
    double a = pi + 2.0 * phi, b = two_pi - 2.0 * phi;
    double s_lo = std::min(a, b), s_hi = std::max(a, b);
    std::vector<std::pair<double, double>> segs{{s_hi + m, 1.97 * pi}};
    // a wide enough window between the two inner singular K values also carries
    // both branches
    if (s_hi - s_lo > 0.2 * pi) segs.emplace_back(s_lo + m, s_hi - m);
    return segs;
}

namespace {

std::optional<EpResult> refine(double phi, double ratio_ep, double K0, double K1, int n,
                               double rtol, int jobs) {
    auto trs = resonance_tracks(phi, ratio_ep, K0, K1, 2 * n, jobs);
    using Track = std::vector<std::pair<double, cxd>>;
    std::vector<const Track*> full;
    for (const auto& t : trs)
        if (static_cast<int>(t.size()) >= 2 * n - 2) full.push_back(&t);
    if (full.size() < 2) return std::nullopt;

    // closest approach of the two branches on the doubled grid
    std::map<double, std::vector<cxd>> by_k;
    for (int t = 0; t < 2; ++t)
        for (const auto& [K, om] : *full[t]) by_k[K].push_back(om);
    double kep = -1.0, dmin = 1e300;
    cxd ommid = 0.0;
    for (const auto& [K, v] : by_k) {
        if (v.size() < 2) continue;
        double d = std::abs(v[0] - v[1]);
        if (d < dmin) {
            dmin = d;
            kep = K;
            ommid = (v[0] + v[1]) / 2.0;
        }
    }
    if (kep < 0.0) return std::nullopt;

    // the branch gap is a sqrt-cone in (ratio, K); descend on a shrinking stencil
    auto gap = [&](double r, double K) -> std::pair<double, std::optional<cxd>> {
        if (!(r > 0.0 && r < 1.0) || !(K > 0.0 && K < two_pi)) return {1e300, std::nullopt};
        ModelParams p = ModelParams::from_xi(phi, r);
        std::vector<cxd> oms;
        try {
            for (const auto& s : solve_states(p, PairMomentum(p, K)))
                if (s.cls == StateClass::Resonance) oms.push_back(s.omega);
        } catch (const std::exception&) {
            return {1e300, std::nullopt};
        }
        if (oms.size() < 2) return {1e300, std::nullopt};
        std::sort(oms.begin(), oms.end(), [&](cxd x, cxd y) {
            return std::abs(x - ommid) < std::abs(y - ommid);
        });
        return {std::abs(oms[0] - oms[1]), (oms[0] + oms[1]) / 2.0};
    };

    double r_c = ratio_ep, K_c = kep;
    double hr = rtol, hK = (K1 - K0) / (2.0 * n - 1);
    for (int iter = 0; iter < 30; ++iter) {
        double bg = dmin, br = r_c, bK = K_c;
        std::optional<cxd> bmid;
        for (int dr = -1; dr <= 1; ++dr) {
            for (int dK = -1; dK <= 1; ++dK) {
                if (dr == 0 && dK == 0) continue;
                auto [g, mid] = gap(r_c + dr * hr, K_c + dK * hK);
                if (g < bg) {
                    bg = g;
                    br = r_c + dr * hr;
                    bK = K_c + dK * hK;
                    bmid = mid;
                }
            }
        }
        if (br == r_c && bK == K_c) {
            hr *= 0.35;
            hK *= 0.35;
        } else {
            dmin = bg;
            r_c = br;
            K_c = bK;
            if (bmid) ommid = *bmid;
        }
        if (dmin < 2e-3 || hr < 1e-7) break;
    }
    EpResult res;
    res.phi = phi;
    res.ratio_ep = r_c;
    res.k_ep = K_c;
    res.min_dist = dmin;
    return res;
}

}  // namespace

EpResult find_ep(double phi, std::pair<double, double> ratio_bracket, int n_grid,
                 double rtol, int jobs) {
    auto [lo, hi] = ratio_bracket;
    if (!(0.0 < lo && lo < hi && hi < 1.0))
        throw std::invalid_argument("find_ep: ratio bracket must sit inside (0, 1)");
    std::array<double, 8> ladder;
    for (int k = 0; k < 8; ++k) ladder[k] = lo + (hi - lo) * k / 7.0;

    for (const auto& [K0, K1] : segments(phi)) {
        std::array<std::optional<bool>, 8> sig;
        for (int k = 0; k < 8; ++k) sig[k] = linked(phi, ladder[k], K0, K1, n_grid, jobs);
        for (int i = 0; i + 1 < 8; ++i) {
            if (!sig[i] || !sig[i + 1] || *sig[i] == *sig[i + 1]) continue;
            double a = ladder[i], b = ladder[i + 1];
            bool fa = *sig[i];
            bool clean = true;
            while (b - a > rtol) {
                double mid = (a + b) / 2.0;
                auto fm = linked(phi, mid, K0, K1, n_grid, jobs);
                if (!fm) {  // tracks unresolvable here: abandon this pair
                    clean = false;
                    break;
                }
                if (*fm == fa)
                    a = mid;
                else
                    b = mid;
            }
            if (!clean) continue;
            if (auto res = refine(phi, (a + b) / 2.0, K0, K1, n_grid, rtol, jobs))
                return *res;
        }
    }
    throw BracketError("find_ep: connectivity signature never flips across the bracket");
}

std::vector<std::pair<double, std::optional<EpResult>>> ep_curve(
    const std::vector<double>& phi_grid, int jobs) {
    std::vector<std::pair<double, std::optional<EpResult>>> out;
    out.reserve(phi_grid.size());
    for (double phi : phi_grid) {
        try {
            out.emplace_back(phi, find_ep(phi, {0.01, 0.75}, 36, 0.004, jobs));
        } catch (const std::exception&) {
            out.emplace_back(phi, std::nullopt);
        }
    }
    return out;
}

std::vector<std::pair<double, double>> edge_coalescence(const ModelParams& p,
                                                        EdgeSide side,
                                                        const std::vector<double>& offsets) {
    std::vector<std::pair<double, double>> out;
    for (double off : offsets) {
        double K = side == EdgeSide::lower ? 2.0 * p.phi + off : two_pi - 2.0 * p.phi - off;
        if (!(K > 0.0 && K < two_pi)) continue;
        std::vector<PairEigenstate> sts;
        try {
            sts = solve_states(p, PairMomentum(p, K));
        } catch (const std::exception&) {
            continue;
        }
        const PairEigenstate* b = nullptr;
        const PairEigenstate* a = nullptr;
        for (const auto& s : sts) {
            if (!b && s.cls == StateClass::Bound) b = &s;
            if (!a && s.cls == StateClass::Antibound) a = &s;
        }
        if (b && a) out.emplace_back(off, std::abs(b->omega - a->omega));
    }
    return out;
}

}  // namespace wqed
