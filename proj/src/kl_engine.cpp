#include "coxkl/kl_engine.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include "coxkl/parallel.hpp"

namespace coxkl {

uint32_t KLStore::intern(const IntPolynomial& p) {
    if (intern_index_.empty() && !glossary.empty()) rebuild_intern_index();
    auto it = intern_index_.find(p);
    if (it != intern_index_.end()) return it->second;
    const uint32_t idx = (uint32_t)glossary.size();
    glossary.push_back(p);
    intern_index_.emplace(p, idx);
    return idx;
}

void KLStore::rebuild_intern_index() {
    intern_index_.clear();
    intern_index_.reserve(glossary.size());
    for (uint32_t i = 0; i < glossary.size(); ++i) intern_index_.emplace(glossary[i], i);
}

bool KLStore::semantically_equal(const KLStore& other) const {
    if (degree != other.degree || level != other.level) return false;
    if (table.size() != other.table.size() || mu_table.size() != other.mu_table.size()) return false;
    for (const auto& [k, idx] : table) {
        auto it = other.table.find(k);
        if (it == other.table.end() || !(other.glossary[it->second] == glossary[idx])) return false;
    }
    for (const auto& [k, m] : mu_table) {
        auto it = other.mu_table.find(k);
        if (it == other.mu_table.end() || it->second != m) return false;
    }
    return true;
}

namespace {

enum class Xform : uint8_t { Id, Inv, Conj, InvConj };  // all involutions

Permutation apply_xform(Xform t, const Permutation& p) {
    switch (t) {
        case Xform::Id: return p;
        case Xform::Inv: return p.inverse();
        case Xform::Conj: return w0_conjugate(p);
        case Xform::InvConj: return w0_conjugate(p.inverse());
    }
    return p;
}

struct Row {
    int top_length = 0;
    std::vector<std::pair<uint64_t, uint32_t>> entries;  // (packed extremal x, glossary idx), sorted
    struct MuEntry {
        uint64_t z;  // packed, same frame as the row's top
        uint64_t mu;
        int lz;
    };
    std::vector<MuEntry> mu_list;
    std::vector<uint8_t> lengths;  // lengths of entries, parallel vector
    uint64_t last_use = 0;
    int pin = 0;

    size_t bytes() const {
        return entries.size() * sizeof(entries[0]) + mu_list.size() * sizeof(MuEntry) +
               lengths.size() + 96;
    }

    uint32_t find(uint64_t packed) const {
        auto it = std::lower_bound(entries.begin(), entries.end(), packed,
                                   [](const auto& e, uint64_t v) { return e.first < v; });
        if (it == entries.end() || it->first != packed) return UINT32_MAX;
        return it->second;
    }
};

constexpr int kWorkSize = 72;

}  // namespace

struct KLEngine::Impl {
    KLStore& store;
    const Options& opts;

    std::unordered_map<Permutation, std::unique_ptr<Row>, PermHash> rows;
    struct IvEntry {
        std::shared_ptr<const std::vector<uint64_t>> data;
        uint64_t last_use = 0;
    };
    std::unordered_map<Permutation, IvEntry, PermHash> intervals;
    uint64_t tick = 0;
    uint64_t cache_bytes = 0;
    Stats st;

    Impl(KLStore& s, const Options& o) : store(s), opts(o) {}

    void check_deadline() const {
        if (opts.deadline && std::chrono::steady_clock::now() > *opts.deadline)
            throw BudgetExceeded("deadline exceeded");
    }

    std::pair<Permutation, Xform> redirect(const Permutation& top) const {
        if (!opts.canonicalize) return {top, Xform::Id};
        Permutation best = top;
        Xform bt = Xform::Id;
        for (Xform t : {Xform::Inv, Xform::Conj, Xform::InvConj}) {
            Permutation c = apply_xform(t, top);
            if (c < best) {
                best = c;
                bt = t;
            }
        }
        return {best, bt};
    }

    void evict_down_to(uint64_t target) {
        // oldest unpinned rows and intervals first
        while (cache_bytes > target) {
            uint64_t best_tick = UINT64_MAX;
            const Permutation* row_victim = nullptr;
            const Permutation* iv_victim = nullptr;
            for (const auto& [k, r] : rows)
                if (r->pin == 0 && r->last_use < best_tick) {
                    best_tick = r->last_use;
                    row_victim = &k;
                    iv_victim = nullptr;
                }
            for (const auto& [k, e] : intervals)
                if (e.data.use_count() == 1 && e.last_use < best_tick) {
                    best_tick = e.last_use;
                    iv_victim = &k;
                    row_victim = nullptr;
                }
            if (row_victim) {
                auto it = rows.find(*row_victim);
                cache_bytes -= it->second->bytes();
                rows.erase(it);
                ++st.evictions;
            } else if (iv_victim) {
                auto it = intervals.find(*iv_victim);
                cache_bytes -= it->second.data->size() * 8 + 64;
                intervals.erase(it);
                ++st.evictions;
            } else {
                break;
            }
        }
    }

    void maybe_evict() {
        if (cache_bytes <= opts.memory_budget) return;
        evict_down_to(opts.memory_budget - opts.memory_budget / 4);
        if (cache_bytes > opts.memory_budget) throw BudgetExceeded("memory budget exceeded");
    }

    std::shared_ptr<const std::vector<uint64_t>> ensure_interval(const Permutation& top) {
        if (auto it = intervals.find(top); it != intervals.end()) {
            it->second.last_use = ++tick;
            return it->second.data;
        }
        check_deadline();
        std::shared_ptr<std::vector<uint64_t>> data;
        auto [rtop, t] = redirect(top);
        if (t != Xform::Id) {
            if (auto jt = intervals.find(rtop); jt != intervals.end()) {
                jt->second.last_use = ++tick;
                const int n = top.degree();
                data = std::make_shared<std::vector<uint64_t>>();
                data->reserve(jt->second.data->size());
                for (uint64_t y : *jt->second.data)
                    data->push_back(apply_xform(t, Permutation::unpack(n, y)).packed());
                std::sort(data->begin(), data->end());
            }
        }
        if (!data) {
            if (length(top) == 0) {
                data = std::make_shared<std::vector<uint64_t>>(1, top.packed());
            } else {
                const int s = __builtin_ctz(right_descent_mask(top)) + 1;
                Permutation v = top;
                v.swap_positions(s);
                auto iv = ensure_interval(v);
                data = std::make_shared<std::vector<uint64_t>>();
                data->reserve(2 * iv->size());
                const int n = top.degree();
                for (uint64_t y : *iv) {
                    data->push_back(y);
                    Permutation p = Permutation::unpack(n, y);
                    p.swap_positions(s);
                    data->push_back(p.packed());
                }
                std::sort(data->begin(), data->end());
                data->erase(std::unique(data->begin(), data->end()), data->end());
                data->shrink_to_fit();
            }
        }
        cache_bytes += data->size() * 8 + 64;
        intervals[top] = IvEntry{data, ++tick};
        maybe_evict();
        return data;
    }

    // Row of a top that is already orbit-redirected (or any top when
    // canonicalisation is off).
    Row& ensure_row(const Permutation& top);

    void ensure_row_for(const Permutation& top) {
        ensure_row(redirect(top).first);
    }

    // Glossary index of P_{x,top}, UINT32_MAX when x is not below top.
    // `mutate` allows building missing rows and touching the LRU clock;
    // parallel read-only phases pass false.
    uint32_t lookup_idx(const Permutation& top, const Permutation& x, bool mutate) {
        auto [rtop, t] = redirect(top);
        Row* row;
        if (mutate) {
            row = &ensure_row(rtop);
            row->last_use = ++tick;
        } else {
            auto it = rows.find(rtop);
            if (it == rows.end()) throw std::logic_error("row missing in read-only lookup");
            row = it->second.get();
        }
        const Permutation xr = raise_to_extremal(rtop, apply_xform(t, x));
        return row->find(xr.packed());
    }

    struct MuDep {
        Permutation z;  // in the caller's frame
        uint64_t mu;
        int lz;
    };

    std::vector<MuDep> mu_entries_for(const Permutation& v) {
        auto [rv, t] = redirect(v);
        Row& row = ensure_row(rv);
        std::vector<MuDep> out;
        out.reserve(row.mu_list.size());
        const int n = v.degree();
        for (const auto& e : row.mu_list)
            out.push_back(MuDep{apply_xform(t, Permutation::unpack(n, e.z)), e.mu, e.lz});
        return out;
    }

    struct PinGuard {
        std::vector<Row*> pinned;
        ~PinGuard() {
            for (Row* r : pinned) --r->pin;
        }
        void add(Row& r) {
            ++r.pin;
            pinned.push_back(&r);
        }
    };

    IntPolynomial compute_rep(const Permutation& top, int L, int s, const Permutation& v,
                              const Permutation& x, int lx, const std::vector<MuDep>& mus) {
        std::array<int64_t, kWorkSize> acc{};
        int hi = -1;
        auto add = [&](const IntPolynomial& p, int shift, int64_t scale) {
            for (int k = 0; k <= p.degree(); ++k) {
                const uint64_t c = p.coeff(k);
                if (c > (uint64_t)INT64_MAX) throw std::overflow_error("kl coefficient overflow");
                int64_t term;
                if (__builtin_mul_overflow((int64_t)c, scale, &term) ||
                    __builtin_add_overflow(acc[k + shift], term, &acc[k + shift]))
                    throw std::overflow_error("kl coefficient overflow");
            }
            hi = std::max(hi, p.degree() + shift);
        };

        Permutation xs = x;
        xs.swap_positions(s);  // xs < x for extremal x
        const uint32_t ixv = lookup_idx(v, x, false);
        if (ixv != UINT32_MAX) add(store.poly(ixv), 1, +1);
        const uint32_t ixsv = lookup_idx(v, xs, false);
        if (ixsv == UINT32_MAX) throw std::logic_error("xs must lie below ws");
        add(store.poly(ixsv), 0, +1);

        for (const auto& m : mus) {
            if (m.lz < lx) continue;
            if (!(m.z == x) && !bruhat_leq(x, m.z)) continue;
            const uint32_t izx = lookup_idx(m.z, x, false);
            if (izx == UINT32_MAX) throw std::logic_error("mu summand lookup miss");
            if (m.mu > (uint64_t)INT64_MAX) throw std::overflow_error("mu overflow");
            add(store.poly(izx), (L - m.lz) / 2, -(int64_t)m.mu);
        }

        while (hi >= 0 && acc[hi] == 0) --hi;
        const int bound = x == top ? 0 : (L - lx - 1) / 2;
        if (hi > bound) throw std::logic_error("kl degree bound violated");
        if (hi < 0 || acc[0] != 1) throw std::logic_error("kl constant term must be 1");
        std::vector<uint64_t> coeffs(hi + 1);
        for (int k = 0; k <= hi; ++k) {
            if (acc[k] < 0) throw std::logic_error("negative kl coefficient");
            coeffs[k] = (uint64_t)acc[k];
        }
        return IntPolynomial(std::move(coeffs));
    }

    Stats stats() const {
        Stats s = st;
        s.cache_bytes = cache_bytes;
        return s;
    }
};

Row& KLEngine::Impl::ensure_row(const Permutation& top) {
    if (auto it = rows.find(top); it != rows.end()) {
        it->second->last_use = ++tick;
        return *it->second;
    }
    check_deadline();
    const int L = length(top);
    if (L > opts.max_interval_length) throw BudgetExceeded("interval length cap exceeded");

    auto row = std::make_unique<Row>();
    row->top_length = L;

    if (L == 0) {
        row->entries = {{top.packed(), store.intern(IntPolynomial::one())}};
        row->lengths = {0};
    } else {
        const int s = __builtin_ctz(right_descent_mask(top)) + 1;
        Permutation v = top;
        v.swap_positions(s);

        PinGuard pins;
        pins.add(ensure_row(redirect(v).first));
        auto mus_all = mu_entries_for(v);
        std::vector<MuDep> mus;
        for (auto& m : mus_all) {
            if (!has_right_descent(m.z, s)) continue;  // need zs < z
            pins.add(ensure_row(redirect(m.z).first));
            mus.push_back(std::move(m));
        }

        auto iv = ensure_interval(top);
        const uint32_t rd = right_descent_mask(top);
        const uint32_t ld = left_descent_mask(top);
        const int n = top.degree();

        std::vector<Permutation> reps;
        std::vector<int> rep_len;
        for (uint64_t y : *iv) {
            Permutation p = Permutation::unpack(n, y);
            bool extremal = true;
            for (uint32_t m = rd; m && extremal; m &= m - 1) {
                const int d = __builtin_ctz(m) + 1;
                extremal = p.image0(d - 1) > p.image0(d);
            }
            for (uint32_t m = ld; m && extremal; m &= m - 1)
                extremal = has_left_descent(p, __builtin_ctz(m) + 1);
            if (!extremal) continue;
            reps.push_back(p);
            rep_len.push_back(length(p));
        }

        std::vector<IntPolynomial> values(reps.size());
        parallel_for(reps.size(), opts.workers, [&](size_t lo, size_t hi2) {
            for (size_t i = lo; i < hi2; ++i)
                values[i] = compute_rep(top, L, s, v, reps[i], rep_len[i], mus);
        });

        row->entries.reserve(reps.size());
        row->lengths.reserve(reps.size());
        for (size_t i = 0; i < reps.size(); ++i) {
            row->entries.emplace_back(reps[i].packed(), store.intern(values[i]));
            row->lengths.push_back((uint8_t)rep_len[i]);
        }
        for (size_t i = 0; i < reps.size(); ++i) {
            const int gap = L - rep_len[i];
            if (gap <= 0 || gap % 2 == 0) continue;
            const uint64_t mu = values[i].coeff((gap - 1) / 2);
            if (mu) row->mu_list.push_back(Row::MuEntry{reps[i].packed(), mu, rep_len[i]});
        }
    }

    Row* ptr = row.get();
    ptr->last_use = ++tick;
    ptr->pin = 1;  // protect from the eviction pass below
    cache_bytes += ptr->bytes();
    ++st.rows_built;
    st.row_entries += ptr->entries.size();
    rows.emplace(top, std::move(row));
    maybe_evict();
    ptr->pin = 0;
    return *ptr;
}

KLEngine::KLEngine(Options opt) : opts_(std::move(opt)) {
    impl_ = std::make_unique<Impl>(store_, opts_);
}

KLEngine::KLEngine(KLStore store, Options opt) : store_(std::move(store)), opts_(std::move(opt)) {
    store_.rebuild_intern_index();
    impl_ = std::make_unique<Impl>(store_, opts_);
}

KLEngine::~KLEngine() = default;

IntPolynomial KLEngine::kl_poly(const Permutation& x, const Permutation& w) {
    if (x.degree() != w.degree()) throw std::invalid_argument("kl_poly: degree mismatch");
    if (x == w) return IntPolynomial::one();
    if (!bruhat_leq(x, w)) return IntPolynomial();
    const PairKey pk = opts_.canonicalize ? canonicalize(w, x) : PairKey{w, x};
    if (auto it = store_.table.find(pk); it != store_.table.end()) return store_.poly(it->second);
    if (pk.w.degree() == 0 || pk.x == pk.w) return IntPolynomial::one();
    const uint32_t idx = impl_->lookup_idx(pk.w, pk.x, true);
    if (idx == UINT32_MAX) throw std::logic_error("kl_poly: canonical pair lookup miss");
    store_.table.emplace(pk, idx);
    return store_.poly(idx);
}

uint64_t KLEngine::mu(const Permutation& x, const Permutation& w) {
    if (x == w || !bruhat_leq(x, w)) return 0;
    const int gap = length(w) - length(x);
    if (gap % 2 == 0) return 0;
    const PairKey pk = opts_.canonicalize ? canonicalize(w, x) : PairKey{w, x};
    if (auto it = store_.mu_table.find(pk); it != store_.mu_table.end()) return it->second;
    const uint64_t m = kl_poly(x, w).coeff((gap - 1) / 2);
    if (m) store_.mu_table.emplace(pk, m);
    return m;
}

void KLEngine::fill_level(int n, int target_length) {
    if (n < 1 || n > Permutation::kMaxDegree) throw std::invalid_argument("fill_level: bad degree");
    if (target_length != store_.level + 1)
        throw std::invalid_argument("fill_level: levels must be filled in order");

    std::vector<Permutation> tops;
    {
        std::vector<int> img(n);
        std::iota(img.begin(), img.end(), 1);
        do {
            Permutation w = Permutation::from_images(img);
            if (length(w) != target_length) continue;
            Permutation rw = impl_->redirect(w).first;
            tops.push_back(rw);
        } while (std::next_permutation(img.begin(), img.end()));
    }
    std::sort(tops.begin(), tops.end());
    tops.erase(std::unique(tops.begin(), tops.end()), tops.end());

    for (const Permutation& top : tops) {
        Row& row = impl_->ensure_row(top);
        Impl::PinGuard pin;
        pin.add(row);
        for (const auto& [packed, idx] : row.entries) {
            const Permutation x = Permutation::unpack(n, packed);
            const PairKey pk = opts_.canonicalize ? canonicalize(top, x) : PairKey{top, x};
            store_.table.emplace(pk, idx);
        }
        for (const auto& m : row.mu_list) {
            const Permutation z = Permutation::unpack(n, m.z);
            const PairKey pk = opts_.canonicalize ? canonicalize(top, z) : PairKey{top, z};
            store_.mu_table.emplace(pk, m.mu);
        }
    }
    store_.level = target_length;
    store_.degree = std::max(store_.degree, n);
}

void KLEngine::fill_all(int n, int max_length) {
    const int lmax = max_length < 0 ? n * (n - 1) / 2 : max_length;
    for (int L = store_.level + 1; L <= lmax; ++L) fill_level(n, L);
}

std::map<Permutation, IntPolynomial> KLEngine::interval_table(const Permutation& top) {
    if (length(top) > opts_.max_interval_length)
        throw BudgetExceeded("interval_table: interval length cap exceeded");
    auto iv = impl_->ensure_interval(top);
    std::map<Permutation, IntPolynomial> out;
    for (uint64_t y : *iv) {
        const Permutation x = Permutation::unpack(top.degree(), y);
        const uint32_t idx = impl_->lookup_idx(top, x, true);
        if (idx == UINT32_MAX) throw std::logic_error("interval_table: lookup miss");
        out.emplace(x, store_.poly(idx));
    }
    return out;
}

KLEngine::Stats KLEngine::stats() const { return impl_->stats(); }

}  // namespace coxkl
