#include "sim.hpp"

#include "errors.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <thread>

namespace mhtc::sim {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kMaxRelays = 6;

void require(bool ok, errc code, const char* msg) {
    if (!ok) throw error(code, msg);
}

double wrap(double v, double L) {
    v = std::fmod(v, L);
    return v < 0.0 ? v + L : v;
}

double axis_delta(double a, double b, double L) {
    double d = std::fabs(a - b);
    return d > 0.5 * L ? L - d : d;
}

double torus_d2(double ax, double ay, double bx, double by, double L) {
    const double dx = axis_delta(ax, bx, L);
    const double dy = axis_delta(ay, by, L);
    return dx * dx + dy * dy;
}

// Shortest displacement from a to b on the torus, component-wise.
double min_image(double from, double to, double L) {
    double d = to - from;
    d -= L * std::round(d / L);
    return d;
}

// r^-alpha as a function of r^2, with the common exponents special-cased.
struct PathGain {
    double alpha = 3.0;
    double operator()(double d2) const {
        if (alpha == 3.0) return 1.0 / (d2 * std::sqrt(d2));
        if (alpha == 4.0) return 1.0 / (d2 * d2);
        return std::pow(d2, -0.5 * alpha);
    }
};

double exp_from_bits(uint64_t bits) {
    return -std::log(static_cast<double>((bits >> 11) + 1) * 0x1.0p-53);
}

// One i.i.d. fading power draw per (tx node, rx node, subslot) per trial.
double fading_power(const PhyModel& phy, uint64_t trial_seed, uint32_t tx, uint32_t rx, int slot) {
    uint64_t h = rng::mix(trial_seed, tx, rx, static_cast<uint64_t>(slot) + 0x51ED2701);
    switch (phy.tag) {
    case channel::ModelTag::rayleigh: return exp_from_bits(h);
    case channel::ModelTag::nakagami_low:
    case channel::ModelTag::nakagami_high: {
        double s = 0.0;
        for (int i = 0; i < phy.fading.m0; ++i) s += exp_from_bits(rng::splitmix64(h));
        return s / static_cast<double>(phy.fading.m0);
    }
    case channel::ModelTag::pathloss_lower:
    case channel::ModelTag::pathloss_upper: return 1.0;
    }
    return 1.0;
}

// Search budget: truncate the candidate region once the expected number of
// potential relay sets with d_m beyond the level drops under tail_eta.
double effective_budget(const analytics::NetworkConfig& cfg, double tail_eta) {
    if (cfg.m == 0 || tail_eta <= 0.0) return cfg.Dm;
    const double lo = cfg.R * cfg.R / static_cast<double>(cfg.m + 1);
    analytics::NetworkConfig c = cfg;
    c.policy = analytics::RetransPolicy::single();
    auto tail = [&](double a) {
        return analytics::expected_relay_sets_up_to(c, cfg.Dm) -
               analytics::expected_relay_sets_up_to(c, a);
    };
    double a_lo = lo * (1.0 + 1e-12) + 1e-12;
    if (tail(a_lo) <= tail_eta) return a_lo;
    double a_hi = cfg.Dm;
    for (int i = 0; i < 200 && (a_hi - a_lo) > 1e-9 * a_hi; ++i) {
        const double mid = 0.5 * (a_lo + a_hi);
        if (tail(mid) > tail_eta)
            a_lo = mid;
        else
            a_hi = mid;
    }
    return a_hi;
}

struct SearchEntry {
    double key = 0.0; // lower bound on the final d_m (exact at full depth)
    double d = 0.0;   // sum of squared hops so far
    uint32_t relays[kMaxRelays] = {};
    uint8_t depth = 0;
};
struct EntryGreater {
    bool operator()(const SearchEntry& a, const SearchEntry& b) const { return a.key > b.key; }
};

// ---------------------------------------------------------------------------
// Per-trial engine. All buffers are reused across trials (epoch-tagged), so a
// long run performs no steady-state allocation.
// ---------------------------------------------------------------------------
class Engine {
public:
    Engine(const analytics::NetworkConfig& cfg, const PhyModel& phy, const SimOptions& opt,
           double d_budget, double d_budget_synth)
        : cfg_(cfg), phy_(phy), opt_(opt), L_(opt.L), slots_(cfg.m + 1),
          beta_(phy.fading.beta), gain_{phy.fading.alpha}, d_budget_(d_budget),
          d_budget_synth_(d_budget_synth) {
        cutoff_ = opt.r_cut < L_ / std::sqrt(2.0);
        r_cut2_ = cutoff_ ? opt.r_cut * opt.r_cut : 2.0 * L_ * L_;
        tail_per_pair_ = cutoff_ ? 2.0 * kPi * std::pow(opt.r_cut, 2.0 - phy.fading.alpha) /
                                       ((phy.fading.alpha - 2.0) * L_ * L_)
                                 : 0.0;
        const double reach = cfg.m > 0 ? 2.0 * std::sqrt(cfg.m * d_budget_) : 0.0;
        r_route_ = cfg.R + reach + (cutoff_ ? opt.r_cut : L_);
        pool_nc_ = std::max(1, static_cast<int>(L_ / 8.0));
        pool_cell_ = L_ / pool_nc_;
        tx_nc_ = cutoff_ ? std::max(1, static_cast<int>(L_ / opt.r_cut)) : 1;
        if (tx_nc_ < 4) tx_nc_ = 1; // grid not worth it; scan all pairs
        tx_cell_ = L_ / tx_nc_;
    }

    // Returns 1 on outage for the typical pair, 0 on success.
    int run_trial(uint64_t trial_index);

    // Exposed for the standalone select_route wrapper.
    void prepare(const Realization& ext, uint64_t trial_seed) {
        real_ = ext;
        trial_seed_ = trial_seed;
        gen_ = rng::Xoshiro256pp(rng::mix(trial_seed, 0xAB5E1EC7));
        begin_trial();
    }
    std::optional<RouteAssignment> route_one(uint32_t pair, Mode mode) {
        return select_for(pair, mode);
    }

    uint64_t cap_hits = 0;
    uint64_t routed_pairs = 0;

private:
    void sample(uint64_t trial_seed);
    void begin_trial();
    std::optional<RouteAssignment> select_for(uint32_t pair, Mode mode);
    std::optional<RouteAssignment> search_chain(uint32_t pair, bool synthetic);
    std::optional<RouteAssignment> nearest_equidistant(uint32_t pair);
    bool final_eval(uint32_t pair, const RouteAssignment& a);

    uint32_t dst_id(uint32_t pair) const { return static_cast<uint32_t>(n_nodes_) + pair; }
    uint32_t tx_node_at(uint32_t pair, int slot, const RouteAssignment& a) const {
        return (slot == 0 || !a.has_chain) ? real_.pairs[pair].src
                                           : a.relays[static_cast<size_t>(slot - 1)];
    }

    double contrib(uint32_t tx_node, double tx_x, double tx_y, uint32_t rx_id, double rx_x,
                   double rx_y, int slot) const {
        const double d2 = torus_d2(tx_x, tx_y, rx_x, rx_y, L_);
        if (d2 > r_cut2_ || d2 < 1e-24) return 0.0;
        return fading_power(phy_, trial_seed_, tx_node, rx_id, slot) * gain_(d2);
    }

    double interference(uint32_t rx_id, double rx_x, double rx_y, int slot, uint32_t self_pair);
    bool pass(uint32_t tx_node, double tx_x, double tx_y, uint32_t rx_id, double rx_x,
              double rx_y, int slot, uint32_t self_pair);

    void move_tx(int slot, uint32_t pair, uint32_t node);
    void apply_chain(uint32_t pair, const RouteAssignment& a);

    int cell_of(double x, double y, int nc, double cell) const {
        int cx = static_cast<int>(x / cell);
        int cy = static_cast<int>(y / cell);
        if (cx >= nc) cx = nc - 1;
        if (cy >= nc) cy = nc - 1;
        return cy * nc + cx;
    }

    template <typename F>
    void scan_pool_disk(double x, double y, double radius, F&& visit);
    template <typename F>
    void scan_tx_cells(double x, double y, int slot, F&& visit);

    const analytics::NetworkConfig& cfg_;
    const PhyModel& phy_;
    const SimOptions& opt_;
    double L_;
    int slots_;
    double beta_;
    PathGain gain_;
    double d_budget_, d_budget_synth_;
    bool cutoff_ = false;
    double r_cut2_ = 0.0, tail_per_pair_ = 0.0, r_route_ = 0.0;
    int pool_nc_ = 1, tx_nc_ = 1;
    double pool_cell_ = 1.0, tx_cell_ = 1.0;

    Realization real_;
    uint64_t trial_seed_ = 0;
    rng::Xoshiro256pp gen_;
    size_t n_nodes_ = 0, n_pairs_ = 0;
    uint32_t epoch_ = 0;

    // pool grid: head/next linked lists over node ids (pool members only)
    std::vector<int32_t> pool_head_, pool_next_;

    // per-slot transmitter state
    std::vector<std::vector<uint32_t>> tx_node_;   // [slot][pair]
    std::vector<std::vector<double>> tx_x_, tx_y_; // [slot][pair]
    std::vector<std::vector<std::vector<uint32_t>>> tx_cells_; // [slot][cell] -> pairs
    std::vector<std::vector<uint32_t>> tx_cell_idx_, tx_cell_pos_; // [slot][pair]
    struct Delta {
        uint32_t tx_old, tx_new;
        double ox, oy, nx, ny;
    };
    std::vector<std::vector<Delta>> log_; // [slot]

    struct CacheEnt {
        double val = 0.0;
        uint32_t ver = 0;
        uint32_t epoch = 0;
    };
    std::vector<std::vector<CacheEnt>> cache_; // [slot][rx_id]

    std::vector<uint32_t> claimed_epoch_; // node claimed iff == epoch_
    std::vector<uint32_t> order_;
    std::vector<SearchEntry> heap_;
    std::vector<RouteAssignment> assign_;
};

void Engine::sample(uint64_t trial_seed) {
    rng::Xoshiro256pp g(trial_seed);
    const uint64_t n = g.poisson(cfg_.lambda * L_ * L_);
    real_.L = L_;
    real_.x.resize(n);
    real_.y.resize(n);
    real_.is_source.resize(n);
    real_.pairs.clear();
    for (uint64_t i = 0; i < n; ++i) {
        real_.x[i] = g.uniform() * L_;
        real_.y[i] = g.uniform() * L_;
    }
    for (uint64_t i = 0; i < n; ++i) real_.is_source[i] = g.uniform() < cfg_.gamma ? 1 : 0;
    for (uint64_t i = 0; i < n; ++i) {
        if (!real_.is_source[i]) continue;
        const double th = 2.0 * kPi * g.uniform();
        Realization::Pair p;
        p.src = static_cast<uint32_t>(i);
        p.dst_x = wrap(real_.x[i] + cfg_.R * std::cos(th), L_);
        p.dst_y = wrap(real_.y[i] + cfg_.R * std::sin(th), L_);
        real_.pairs.push_back(p);
    }
}

void Engine::begin_trial() {
    n_nodes_ = real_.node_count();
    n_pairs_ = real_.pairs.size();
    ++epoch_;

    pool_head_.assign(static_cast<size_t>(pool_nc_) * pool_nc_, -1);
    pool_next_.resize(n_nodes_);
    for (size_t i = 0; i < n_nodes_; ++i) {
        if (real_.is_source[i]) continue;
        const int c = cell_of(real_.x[i], real_.y[i], pool_nc_, pool_cell_);
        pool_next_[i] = pool_head_[static_cast<size_t>(c)];
        pool_head_[static_cast<size_t>(c)] = static_cast<int32_t>(i);
    }

    const size_t rx_count = n_nodes_ + n_pairs_;
    tx_node_.resize(static_cast<size_t>(slots_));
    tx_x_.resize(static_cast<size_t>(slots_));
    tx_y_.resize(static_cast<size_t>(slots_));
    tx_cells_.resize(static_cast<size_t>(slots_));
    tx_cell_idx_.resize(static_cast<size_t>(slots_));
    tx_cell_pos_.resize(static_cast<size_t>(slots_));
    log_.resize(static_cast<size_t>(slots_));
    cache_.resize(static_cast<size_t>(slots_));
    for (int s = 0; s < slots_; ++s) {
        auto& cells = tx_cells_[static_cast<size_t>(s)];
        cells.resize(static_cast<size_t>(tx_nc_) * tx_nc_);
        for (auto& c : cells) c.clear();
        tx_node_[static_cast<size_t>(s)].resize(n_pairs_);
        tx_x_[static_cast<size_t>(s)].resize(n_pairs_);
        tx_y_[static_cast<size_t>(s)].resize(n_pairs_);
        tx_cell_idx_[static_cast<size_t>(s)].resize(n_pairs_);
        tx_cell_pos_[static_cast<size_t>(s)].resize(n_pairs_);
        log_[static_cast<size_t>(s)].clear();
        if (cache_[static_cast<size_t>(s)].size() < rx_count)
            cache_[static_cast<size_t>(s)].resize(rx_count);
        for (uint32_t p = 0; p < n_pairs_; ++p) {
            const uint32_t src = real_.pairs[p].src;
            tx_node_[static_cast<size_t>(s)][p] = src;
            tx_x_[static_cast<size_t>(s)][p] = real_.x[src];
            tx_y_[static_cast<size_t>(s)][p] = real_.y[src];
            const int c = cell_of(real_.x[src], real_.y[src], tx_nc_, tx_cell_);
            tx_cell_idx_[static_cast<size_t>(s)][p] = static_cast<uint32_t>(c);
            tx_cell_pos_[static_cast<size_t>(s)][p] =
                static_cast<uint32_t>(cells[static_cast<size_t>(c)].size());
            cells[static_cast<size_t>(c)].push_back(p);
        }
    }
    if (claimed_epoch_.size() < n_nodes_) claimed_epoch_.resize(n_nodes_, 0);
    assign_.assign(n_pairs_, RouteAssignment{});
}

void Engine::move_tx(int slot, uint32_t pair, uint32_t node) {
    auto& nodes = tx_node_[static_cast<size_t>(slot)];
    auto& xs = tx_x_[static_cast<size_t>(slot)];
    auto& ys = tx_y_[static_cast<size_t>(slot)];
    Delta d{nodes[pair], node, xs[pair], ys[pair], real_.x[node], real_.y[node]};
    log_[static_cast<size_t>(slot)].push_back(d);
    // re-bucket in the tx grid
    auto& cells = tx_cells_[static_cast<size_t>(slot)];
    auto& cidx = tx_cell_idx_[static_cast<size_t>(slot)];
    auto& cpos = tx_cell_pos_[static_cast<size_t>(slot)];
    auto& old_cell = cells[cidx[pair]];
    const uint32_t pos = cpos[pair];
    const uint32_t moved = old_cell.back();
    old_cell[pos] = moved;
    cpos[moved] = pos;
    old_cell.pop_back();
    const int nc = cell_of(d.nx, d.ny, tx_nc_, tx_cell_);
    cidx[pair] = static_cast<uint32_t>(nc);
    cpos[pair] = static_cast<uint32_t>(cells[static_cast<size_t>(nc)].size());
    cells[static_cast<size_t>(nc)].push_back(pair);
    nodes[pair] = node;
    xs[pair] = d.nx;
    ys[pair] = d.ny;
}

template <typename F>
void Engine::scan_pool_disk(double x, double y, double radius, F&& visit) {
    if (pool_nc_ == 1) {
        for (int32_t i = pool_head_[0]; i >= 0; i = pool_next_[static_cast<size_t>(i)])
            visit(static_cast<uint32_t>(i));
        return;
    }
    int span = static_cast<int>(radius / pool_cell_) + 1;
    if (2 * span + 1 >= pool_nc_) span = pool_nc_ / 2;
    const int cx0 = static_cast<int>(x / pool_cell_);
    const int cy0 = static_cast<int>(y / pool_cell_);
    const int lox = cx0 - span, hix = cx0 + span;
    const int loy = cy0 - span, hiy = cy0 + span;
    for (int cy = loy; cy <= hiy; ++cy) {
        const int wy = ((cy % pool_nc_) + pool_nc_) % pool_nc_;
        for (int cx = lox; cx <= hix; ++cx) {
            const int wx = ((cx % pool_nc_) + pool_nc_) % pool_nc_;
            for (int32_t i = pool_head_[static_cast<size_t>(wy * pool_nc_ + wx)]; i >= 0;
                 i = pool_next_[static_cast<size_t>(i)])
                visit(static_cast<uint32_t>(i));
        }
    }
}

template <typename F>
void Engine::scan_tx_cells(double x, double y, int slot, F&& visit) {
    auto& cells = tx_cells_[static_cast<size_t>(slot)];
    if (tx_nc_ == 1) {
        for (uint32_t q : cells[0]) visit(q);
        return;
    }
    const int cx0 = static_cast<int>(x / tx_cell_);
    const int cy0 = static_cast<int>(y / tx_cell_);
    for (int dy = -1; dy <= 1; ++dy) {
        const int wy = ((cy0 + dy) % tx_nc_ + tx_nc_) % tx_nc_;
        for (int dx = -1; dx <= 1; ++dx) {
            const int wx = ((cx0 + dx) % tx_nc_ + tx_nc_) % tx_nc_;
            for (uint32_t q : cells[static_cast<size_t>(wy * tx_nc_ + wx)]) visit(q);
        }
    }
}

double Engine::interference(uint32_t rx_id, double rx_x, double rx_y, int slot,
                            uint32_t self_pair) {
    auto& ent = cache_[static_cast<size_t>(slot)][rx_id];
    auto& log = log_[static_cast<size_t>(slot)];
    if (ent.epoch != epoch_) {
        double v = 0.0;
        scan_tx_cells(rx_x, rx_y, slot, [&](uint32_t q) {
            v += contrib(tx_node_[static_cast<size_t>(slot)][q], tx_x_[static_cast<size_t>(slot)][q],
                         tx_y_[static_cast<size_t>(slot)][q], rx_id, rx_x, rx_y, slot);
        });
        ent.val = v;
        ent.ver = static_cast<uint32_t>(log.size());
        ent.epoch = epoch_;
    } else if (ent.ver < log.size()) {
        for (size_t i = ent.ver; i < log.size(); ++i) {
            const Delta& d = log[i];
            ent.val -= contrib(d.tx_old, d.ox, d.oy, rx_id, rx_x, rx_y, slot);
            ent.val += contrib(d.tx_new, d.nx, d.ny, rx_id, rx_x, rx_y, slot);
        }
        ent.ver = static_cast<uint32_t>(log.size());
    }
    const double own = contrib(tx_node_[static_cast<size_t>(slot)][self_pair],
                               tx_x_[static_cast<size_t>(slot)][self_pair],
                               tx_y_[static_cast<size_t>(slot)][self_pair], rx_id, rx_x, rx_y, slot);
    const double far = tail_per_pair_ * static_cast<double>(n_pairs_ > 0 ? n_pairs_ - 1 : 0);
    return std::max(0.0, ent.val - own) + far;
}

bool Engine::pass(uint32_t tx_node, double tx_x, double tx_y, uint32_t rx_id, double rx_x,
                  double rx_y, int slot, uint32_t self_pair) {
    const double d2 = torus_d2(tx_x, tx_y, rx_x, rx_y, L_);
    if (d2 < 1e-24) return true;
    const double I = interference(rx_id, rx_x, rx_y, slot, self_pair);
    const double sig = fading_power(phy_, trial_seed_, tx_node, rx_id, slot) * gain_(d2);
    return sig >= beta_ * I;
}

std::optional<RouteAssignment> Engine::search_chain(uint32_t pair, bool synthetic) {
    const auto& pr = real_.pairs[pair];
    const double sx = real_.x[pr.src], sy = real_.y[pr.src];
    const double dx = pr.dst_x, dy = pr.dst_y;
    const uint32_t dst = dst_id(pair);
    const double budget = synthetic ? d_budget_synth_ : d_budget_;
    const int m = cfg_.m;
    const double Gm1 = std::pow(cfg_.hop.G, m + 1);
    const double Lam = cfg_.Lambda();

    if (m == 0) {
        const double d0 = torus_d2(sx, sy, dx, dy, L_);
        if (d0 > budget) return std::nullopt;
        bool ok;
        if (synthetic)
            ok = gen_.uniform() < Gm1 * std::exp(-Lam * d0);
        else
            ok = pass(pr.src, sx, sy, dst, dx, dy, 0, pair);
        if (!ok) return std::nullopt;
        RouteAssignment a;
        a.has_chain = true;
        return a;
    }

    heap_.clear();
    uint64_t work = 0;
    auto expand = [&](double px, double py, uint32_t pnode, double d, int depth,
                      const uint32_t* relays) {
        const double rad2 = budget - d;
        if (rad2 <= 0.0) return;
        const int rem = m - depth; // hops left to the destination after the child
        scan_pool_disk(px, py, std::sqrt(rad2), [&](uint32_t c) {
            ++work;
            if (claimed_epoch_[c] == epoch_) return;
            for (int i = 0; i < depth; ++i)
                if (relays[i] == c) return;
            const double cx = real_.x[c], cy = real_.y[c];
            const double hop2 = torus_d2(px, py, cx, cy, L_);
            if (d + hop2 > budget) return;
            const double bound = d + hop2 + torus_d2(cx, cy, dx, dy, L_) / rem;
            if (bound > budget) return;
            if (!synthetic && !pass(pnode, px, py, c, cx, cy, depth, pair)) return;
            SearchEntry e;
            e.key = bound;
            e.d = d + hop2;
            e.depth = static_cast<uint8_t>(depth + 1);
            for (int i = 0; i < depth; ++i) e.relays[i] = relays[i];
            e.relays[depth] = c;
            heap_.push_back(e);
            std::push_heap(heap_.begin(), heap_.end(), EntryGreater{});
        });
    };

    const uint32_t no_relays[kMaxRelays] = {};
    expand(sx, sy, pr.src, 0.0, 0, no_relays);
    while (!heap_.empty()) {
        if (work > opt_.node_cap) {
            ++cap_hits;
            break;
        }
        std::pop_heap(heap_.begin(), heap_.end(), EntryGreater{});
        SearchEntry e = heap_.back();
        heap_.pop_back();
        ++work;
        const uint32_t last = e.relays[e.depth - 1];
        const double lx = real_.x[last], ly = real_.y[last];
        if (e.depth == m) {
            bool ok;
            if (synthetic)
                ok = gen_.uniform() < Gm1 * std::exp(-Lam * e.key); // e.key is the exact d_m
            else
                ok = pass(last, lx, ly, dst, dx, dy, m, pair);
            if (ok) {
                RouteAssignment a;
                a.has_chain = true;
                a.relays.assign(e.relays, e.relays + m);
                return a;
            }
            continue;
        }
        expand(lx, ly, last, e.d, e.depth, e.relays);
    }
    return std::nullopt;
}

std::optional<RouteAssignment> Engine::nearest_equidistant(uint32_t pair) {
    const auto& pr = real_.pairs[pair];
    const double sx = real_.x[pr.src], sy = real_.y[pr.src];
    const double vx = min_image(sx, pr.dst_x, L_);
    const double vy = min_image(sy, pr.dst_y, L_);
    const int m = cfg_.m;
    RouteAssignment a;
    a.has_chain = true;
    for (int j = 1; j <= m; ++j) {
        const double ix = wrap(sx + vx * j / (m + 1.0), L_);
        const double iy = wrap(sy + vy * j / (m + 1.0), L_);
        int32_t best = -1;
        double best_d2 = 1e300;
        // expanding square rings over the pool grid
        const int cx0 = static_cast<int>(ix / pool_cell_);
        const int cy0 = static_cast<int>(iy / pool_cell_);
        for (int ring = 0; ring <= pool_nc_; ++ring) {
            const double ring_min = (ring - 1) * pool_cell_;
            if (best >= 0 && ring_min > 0.0 && ring_min * ring_min > best_d2) break;
            for (int cy = cy0 - ring; cy <= cy0 + ring; ++cy) {
                for (int cx = cx0 - ring; cx <= cx0 + ring; ++cx) {
                    if (ring > 0 && std::abs(cx - cx0) != ring && std::abs(cy - cy0) != ring)
                        continue;
                    const int wx = ((cx % pool_nc_) + pool_nc_) % pool_nc_;
                    const int wy = ((cy % pool_nc_) + pool_nc_) % pool_nc_;
                    for (int32_t i = pool_head_[static_cast<size_t>(wy * pool_nc_ + wx)]; i >= 0;
                         i = pool_next_[static_cast<size_t>(i)]) {
                        const uint32_t c = static_cast<uint32_t>(i);
                        if (claimed_epoch_[c] == epoch_) continue;
                        bool used = false;
                        for (uint32_t r : a.relays)
                            if (r == c) used = true;
                        if (used) continue;
                        const double d2 = torus_d2(ix, iy, real_.x[c], real_.y[c], L_);
                        if (d2 < best_d2) {
                            best_d2 = d2;
                            best = i;
                        }
                    }
                }
            }
            if (ring == pool_nc_) break;
        }
        if (best < 0) return std::nullopt;
        a.relays.push_back(static_cast<uint32_t>(best));
    }
    // route must respect the distance budget
    double d = 0.0;
    double px = sx, py = sy;
    for (uint32_t r : a.relays) {
        d += torus_d2(px, py, real_.x[r], real_.y[r], L_);
        px = real_.x[r];
        py = real_.y[r];
    }
    d += torus_d2(px, py, pr.dst_x, pr.dst_y, L_);
    if (d > cfg_.Dm) return std::nullopt;
    return a;
}

std::optional<RouteAssignment> Engine::select_for(uint32_t pair, Mode mode) {
    switch (mode) {
    case Mode::dynamic: return search_chain(pair, false);
    case Mode::synthetic_independent: return search_chain(pair, true);
    case Mode::predetermined_equidistant: return nearest_equidistant(pair);
    }
    return std::nullopt;
}

void Engine::apply_chain(uint32_t pair, const RouteAssignment& a) {
    assign_[pair] = a;
    for (size_t t = 0; t < a.relays.size(); ++t) {
        claimed_epoch_[a.relays[t]] = epoch_;
        move_tx(static_cast<int>(t) + 1, pair, a.relays[t]);
    }
}

bool Engine::final_eval(uint32_t pair, const RouteAssignment& a) {
    if (!a.has_chain) return false;
    const auto& pr = real_.pairs[pair];
    const int m = cfg_.m;
    double px = real_.x[pr.src], py = real_.y[pr.src];
    uint32_t pnode = pr.src;
    for (int t = 0; t <= m; ++t) {
        uint32_t rx;
        double rxp_x, rxp_y;
        if (t == m) {
            rx = dst_id(pair);
            rxp_x = pr.dst_x;
            rxp_y = pr.dst_y;
        } else {
            rx = a.relays[static_cast<size_t>(t)];
            rxp_x = real_.x[rx];
            rxp_y = real_.y[rx];
        }
        if (!pass(pnode, px, py, rx, rxp_x, rxp_y, t, pair)) return false;
        pnode = rx;
        px = rxp_x;
        py = rxp_y;
    }
    return true;
}

int Engine::run_trial(uint64_t trial_index) {
    trial_seed_ = rng::mix(opt_.seed, trial_index, 0x54524941);
    gen_ = rng::Xoshiro256pp(rng::mix(trial_seed_, 0xAB5E1EC7));
    sample(trial_seed_);
    begin_trial();
    if (n_pairs_ == 0) return 1;

    const uint32_t typical = 0;
    const auto& tp = real_.pairs[typical];
    const double cx = wrap(real_.x[tp.src] + 0.5 * min_image(real_.x[tp.src], tp.dst_x, L_), L_);
    const double cy = wrap(real_.y[tp.src] + 0.5 * min_image(real_.y[tp.src], tp.dst_y, L_), L_);

    order_.clear();
    if (opt_.mode == Mode::synthetic_independent) {
        order_.push_back(typical);
    } else {
        const double rr2 = r_route_ * r_route_;
        for (uint32_t p = 0; p < n_pairs_; ++p) {
            const double d2 = torus_d2(real_.x[real_.pairs[p].src], real_.y[real_.pairs[p].src],
                                       cx, cy, L_);
            if (p == typical || d2 <= rr2) order_.push_back(p);
        }
        for (size_t i = order_.size(); i > 1; --i)
            std::swap(order_[i - 1], order_[gen_.next() % i]);
    }
    routed_pairs += order_.size();

    for (uint32_t pid : order_) {
        auto chain = select_for(pid, opt_.mode);
        if (chain) apply_chain(pid, *chain);
    }

    if (opt_.mode == Mode::synthetic_independent)
        return assign_[typical].has_chain ? 0 : 1;
    return final_eval(typical, assign_[typical]) ? 0 : 1;
}

void validate_run(const analytics::NetworkConfig& cfg, const PhyModel& phy, const SimOptions& opt,
                  bool enforce_trials) {
    cfg.validate();
    require(cfg.policy.kind == analytics::RetransPolicy::Kind::single_attempt, errc::config,
            "sim: retransmission policies are analytic-only; use single_attempt");
    require(cfg.m <= kMaxRelays, errc::config, "sim: m larger than supported relay count");
    require(!cfg.unbounded(), errc::config, "sim: finite Dm required");
    require(opt.L >= 10.0 * std::max(cfg.R, std::sqrt(cfg.Dm)) - 1e-9, errc::config,
            "sim: degenerate window; L must be >= 10*max(R, sqrt(Dm))");
    if (enforce_trials) require(opt.trials >= 1000, errc::config, "sim: trials must be >= 1000");
    if (opt.mode == Mode::synthetic_independent)
        require(cfg.hop.G <= 1.0 + 1e-12, errc::config,
                "sim: synthetic mode needs a G = 1 hop model");
    require(phy.fading.alpha > 2.0 && phy.fading.beta > 0.0, errc::config,
            "sim: invalid fading spec");
}

} // namespace

const char* mode_name(Mode mode) {
    switch (mode) {
    case Mode::dynamic: return "dynamic";
    case Mode::predetermined_equidistant: return "predetermined";
    case Mode::synthetic_independent: return "independent";
    }
    return "?";
}

Mode mode_from_name(const std::string& name) {
    if (name == "dynamic") return Mode::dynamic;
    if (name == "predetermined") return Mode::predetermined_equidistant;
    if (name == "independent") return Mode::synthetic_independent;
    throw error(errc::config, "unknown simulation mode: " + name);
}

Realization sample_network(const analytics::NetworkConfig& cfg, double L, uint64_t seed) {
    cfg.validate();
    require(L >= 10.0 * std::max(cfg.R, cfg.unbounded() ? 0.0 : std::sqrt(cfg.Dm)) - 1e-9,
            errc::config, "sample_network: degenerate window");
    rng::Xoshiro256pp g(seed);
    Realization real;
    real.L = L;
    const uint64_t n = g.poisson(cfg.lambda * L * L);
    real.x.resize(n);
    real.y.resize(n);
    real.is_source.resize(n);
    for (uint64_t i = 0; i < n; ++i) {
        real.x[i] = g.uniform() * L;
        real.y[i] = g.uniform() * L;
    }
    for (uint64_t i = 0; i < n; ++i) real.is_source[i] = g.uniform() < cfg.gamma ? 1 : 0;
    for (uint64_t i = 0; i < n; ++i) {
        if (!real.is_source[i]) continue;
        const double th = 2.0 * kPi * g.uniform();
        Realization::Pair p;
        p.src = static_cast<uint32_t>(i);
        p.dst_x = wrap(real.x[i] + cfg.R * std::cos(th), L);
        p.dst_y = wrap(real.y[i] + cfg.R * std::sin(th), L);
        real.pairs.push_back(p);
    }
    return real;
}

std::vector<int> evaluate_sir(const analytics::NetworkConfig& cfg, const PhyModel& phy,
                              const Realization& real,
                              const std::vector<RouteAssignment>& assignments, int subslot,
                              uint64_t trial_seed, double r_cut) {
    require(assignments.size() == real.pairs.size(), errc::config,
            "evaluate_sir: one assignment per pair required");
    require(subslot >= 0 && subslot <= cfg.m, errc::config, "evaluate_sir: subslot out of range");
    const double L = real.L;
    const bool cutoff = r_cut < L / std::sqrt(2.0);
    const double rc2 = cutoff ? r_cut * r_cut : 2.0 * L * L;
    const double tail =
        cutoff ? 2.0 * kPi * std::pow(r_cut, 2.0 - phy.fading.alpha) /
                     ((phy.fading.alpha - 2.0) * L * L)
               : 0.0;
    PathGain gain{phy.fading.alpha};
    const size_t P = real.pairs.size();

    // active transmitter of each pair in this subslot
    std::vector<uint32_t> txn(P);
    std::vector<double> txx(P), txy(P);
    for (size_t q = 0; q < P; ++q) {
        const auto& a = assignments[q];
        if (a.has_chain)
            require(static_cast<int>(a.relays.size()) == cfg.m, errc::config,
                    "evaluate_sir: chain must carry m relays");
        uint32_t node = real.pairs[q].src;
        if (a.has_chain && subslot > 0) node = a.relays[static_cast<size_t>(subslot - 1)];
        txn[q] = node;
        txx[q] = real.x[node];
        txy[q] = real.y[node];
    }

    std::vector<int> out(P, -1);
    for (size_t p = 0; p < P; ++p) {
        const auto& a = assignments[p];
        if (!a.has_chain) continue;
        uint32_t rx;
        double rxx, rxy;
        if (subslot == cfg.m) {
            rx = static_cast<uint32_t>(real.node_count() + p);
            rxx = real.pairs[p].dst_x;
            rxy = real.pairs[p].dst_y;
        } else {
            rx = a.relays[static_cast<size_t>(subslot)];
            rxx = real.x[rx];
            rxy = real.y[rx];
        }
        double I = tail * static_cast<double>(P > 0 ? P - 1 : 0);
        for (size_t q = 0; q < P; ++q) {
            if (q == p) continue;
            const double d2 = torus_d2(txx[q], txy[q], rxx, rxy, L);
            if (d2 > rc2 || d2 < 1e-24) continue;
            I += fading_power(phy, trial_seed, txn[q], rx, subslot) * gain(d2);
        }
        const double d2 = torus_d2(txx[p], txy[p], rxx, rxy, L);
        const double sig =
            d2 < 1e-24 ? 1e300 : fading_power(phy, trial_seed, txn[p], rx, subslot) * gain(d2);
        out[p] = sig >= phy.fading.beta * I ? 1 : 0;
    }
    return out;
}

std::optional<RouteAssignment> select_route(const analytics::NetworkConfig& cfg,
                                            const PhyModel& phy, const Realization& real,
                                            uint32_t pair, Mode mode, uint64_t trial_seed,
                                            const SimOptions& opt) {
    SimOptions o = opt;
    o.L = real.L;
    o.mode = mode;
    validate_run(cfg, phy, o, false);
    require(pair < real.pairs.size(), errc::config, "select_route: pair id out of range");
    const double budget = effective_budget(cfg, o.stop_tail);
    const double budget_synth = effective_budget(cfg, std::min(o.stop_tail, 1e-6));
    Engine eng(cfg, phy, o, budget, budget_synth);
    eng.prepare(real, trial_seed);
    return eng.route_one(pair, mode);
}

OutageRun run_outage_trials(const analytics::NetworkConfig& cfg, const PhyModel& phy,
                            const SimOptions& opt) {
    validate_run(cfg, phy, opt, true);
    const double budget = effective_budget(cfg, opt.stop_tail);
    const double budget_synth = effective_budget(cfg, std::min(opt.stop_tail, 1e-6));

    std::vector<uint8_t> outage(opt.trials);
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    unsigned nthreads = opt.threads > 0 ? static_cast<unsigned>(opt.threads) : hw;
    nthreads = std::min<unsigned>(nthreads, static_cast<unsigned>(opt.trials));

    std::vector<uint64_t> caps(nthreads, 0), routed(nthreads, 0);
    auto worker = [&](unsigned t) {
        Engine eng(cfg, phy, opt, budget, budget_synth);
        for (uint64_t i = t; i < opt.trials; i += nthreads)
            outage[i] = static_cast<uint8_t>(eng.run_trial(i));
        caps[t] = eng.cap_hits;
        routed[t] = eng.routed_pairs;
    };
    if (nthreads <= 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }

    uint64_t bad = 0;
    for (uint8_t b : outage) bad += b;
    OutageRun run;
    run.estimate.trials = opt.trials;
    run.estimate.seed = opt.seed;
    run.estimate.mean = static_cast<double>(bad) / static_cast<double>(opt.trials);
    const double p = run.estimate.mean;
    run.estimate.std =
        opt.trials > 1 ? std::sqrt(p * (1.0 - p) / static_cast<double>(opt.trials - 1)) : 0.0;
    for (unsigned t = 0; t < nthreads; ++t) {
        run.diagnostics.cap_hits += caps[t];
        run.diagnostics.routed_pairs_mean += static_cast<double>(routed[t]);
    }
    run.diagnostics.routed_pairs_mean /= static_cast<double>(opt.trials);
    run.diagnostics.d_budget = budget;
    return run;
}

SweepResult max_density_sweep(const analytics::NetworkConfig& cfg, const PhyModel& phy,
                              double epsilon, const std::vector<double>& grid,
                              const SimOptions& opt) {
    require(!grid.empty(), errc::config, "max_density_sweep: empty grid");
    SweepResult res;
    int violations = 0;
    for (size_t i = 0; i < grid.size(); ++i) {
        analytics::NetworkConfig c = cfg;
        c.lambda = grid[i];
        SimOptions o = opt;
        o.seed = rng::mix(opt.seed, 0x53574550, i);
        const OutageRun run = run_outage_trials(c, phy, o);
        res.points.push_back({grid[i], run.estimate});
        if (run.estimate.mean <= epsilon) {
            res.found = true;
            res.max_lambda = grid[i];
            violations = 0;
        } else if (++violations >= 2) {
            break; // outage only grows with density past this point
        }
    }
    if (!res.found) throw error(errc::unachievable,
                                "max_density_sweep: every grid density violates epsilon");
    return res;
}

} // namespace mhtc::sim
