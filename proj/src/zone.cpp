#include "rail/zone.hpp"

#include <algorithm>
#include <numeric>
#include <cassert>
#include <map>
#include <sstream>
#include <type_traits>

namespace rail {

std::optional<size_t> VarSpace::index_of(const std::string& name) const {
    for (size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return i;
    return std::nullopt;
}

VarSpacePtr make_var_space(std::vector<std::string> clocks, std::vector<std::string> params) {
    auto sp = std::make_shared<VarSpace>();
    sp->clock_count = clocks.size();
    sp->names = std::move(clocks);
    sp->names.insert(sp->names.end(), params.begin(), params.end());
    return sp;
}

VarSpacePtr param_space_of(const VarSpace& space) {
    auto sp = std::make_shared<VarSpace>();
    sp->clock_count = 0;
    sp->names.assign(space.names.begin() + static_cast<long>(space.clock_count),
                     space.names.end());
    return sp;
}

namespace {

int sign_of(const Rat& r) { return r.sign(); }

size_t first_nonzero(const std::vector<Rat>& v) {
    for (size_t i = 0; i < v.size(); ++i)
        if (!v[i].is_zero()) return i;
    return v.size();
}

bool all_zero(const std::vector<Rat>& v) { return first_nonzero(v) == v.size(); }

// row := row + factor * other (rhs included, rel of `row` kept).
void add_scaled(LinRow& row, const LinRow& other, const Rat& factor) {
    for (size_t i = 0; i < row.coef.size(); ++i) row.coef[i] += factor * other.coef[i];
    row.rhs += factor * other.rhs;
}

int compare_rat(const Rat& a, const Rat& b) { return rat_cmp(a, b); }

int compare_rows(const LinRow& a, const LinRow& b) {
    int ea = a.rel == Rel::Eq ? 0 : 1;
    int eb = b.rel == Rel::Eq ? 0 : 1;
    if (ea != eb) return ea - eb;  // equalities first
    for (size_t i = 0; i < a.coef.size(); ++i) {
        int c = compare_rat(a.coef[i], b.coef[i]);
        if (c != 0) return c;
    }
    if (a.rel != b.rel) return static_cast<int>(a.rel) < static_cast<int>(b.rel) ? -1 : 1;
    return compare_rat(a.rhs, b.rhs);
}

}  // namespace

// ---------------------------------------------------------------------------
// Cheap syntactic reduction
// ---------------------------------------------------------------------------

namespace {

// Groups rows by direction (coefficient vector scaled so its first nonzero
// entry is +1) and keeps, per direction, the tightest upper bound, tightest
// lower bound and any equality. Detects syntactic emptiness from
// upper/lower/equality clashes.
struct DirectionInfo {
    bool has_upper = false, upper_strict = false;
    Rat upper;
    bool has_lower = false, lower_strict = false;  // stored as t >= lower
    Rat lower;
    bool has_eq = false;
    Rat eq;
};

}  // namespace

void zone_reduce(ParametricZone& z) {
    if (z.empty_) {
        z.rows_.clear();
        return;
    }
    std::map<std::vector<Rat>, DirectionInfo> dirs;
    bool empty = false;

    for (const auto& row : z.rows_) {
        size_t lead = first_nonzero(row.coef);
        if (lead == row.coef.size()) {
            // Constant row.
            switch (row.rel) {
                case Rel::Le: if (row.rhs.sign() < 0) empty = true; break;
                case Rel::Lt: if (row.rhs.sign() <= 0) empty = true; break;
                case Rel::Eq: if (!row.rhs.is_zero()) empty = true; break;
            }
            continue;
        }
        // Key rows by the direction vector scaled so its first nonzero entry
        // is +1; a negative scale flips the inequality into a lower bound.
        Rat scale = row.coef[lead].inverse();
        bool flipped = scale.sign() < 0;
        std::vector<Rat> dir(row.coef.size());
        for (size_t i = 0; i < dir.size(); ++i) dir[i] = row.coef[i] * scale;
        Rat bound = row.rhs * scale;
        auto& info = dirs[std::move(dir)];
        if (row.rel == Rel::Eq) {
            if (info.has_eq && info.eq != bound) empty = true;
            info.has_eq = true;
            info.eq = bound;
        } else {
            bool strict = row.rel == Rel::Lt;
            if (!flipped) {
                // dir . x (<|<=) bound
                if (!info.has_upper || bound < info.upper ||
                    (bound == info.upper && strict && !info.upper_strict)) {
                    info.has_upper = true;
                    info.upper = bound;
                    info.upper_strict = strict;
                }
            } else {
                // dir . x (>|>=) bound
                if (!info.has_lower || bound > info.lower ||
                    (bound == info.lower && strict && !info.lower_strict)) {
                    info.has_lower = true;
                    info.lower = bound;
                    info.lower_strict = strict;
                }
            }
        }
    }

    std::vector<LinRow> out;
    for (auto& [dir, info] : dirs) {
        if (info.has_eq) {
            if (info.has_upper &&
                (info.upper < info.eq || (info.upper == info.eq && info.upper_strict)))
                empty = true;
            if (info.has_lower &&
                (info.lower > info.eq || (info.lower == info.eq && info.lower_strict)))
                empty = true;
            out.push_back({dir, Rel::Eq, info.eq});
            continue;
        }
        if (info.has_upper && info.has_lower) {
            if (rat_cmp(info.lower, info.upper) > 0) empty = true;
            if (info.lower == info.upper) {
                if (info.upper_strict || info.lower_strict) empty = true;
                else {
                    out.push_back({dir, Rel::Eq, info.upper});
                    continue;
                }
            }
        }
        if (info.has_upper) out.push_back({dir, info.upper_strict ? Rel::Lt : Rel::Le, info.upper});
        if (info.has_lower) {
            std::vector<Rat> neg(dir.size());
            for (size_t i = 0; i < dir.size(); ++i) neg[i] = -dir[i];
            out.push_back({std::move(neg), info.lower_strict ? Rel::Lt : Rel::Le, -info.lower});
        }
    }

    if (empty) {
        z.empty_ = true;
        z.rows_.clear();
        return;
    }
    std::sort(out.begin(), out.end(),
              [](const LinRow& a, const LinRow& b) { return compare_rows(a, b) < 0; });
    z.rows_ = std::move(out);
}

void ParametricZone::add_row(LinRow row) {
    assert(space_ && row.coef.size() == space_->size());
    rows_.push_back(std::move(row));
    zone_reduce(*this);
}

void ParametricZone::add_bound(size_t var, Rel rel, Rat rhs) {
    LinRow row;
    row.coef.assign(space_->size(), Rat(0));
    row.coef[var] = 1;
    row.rel = rel;
    row.rhs = std::move(rhs);
    add_row(std::move(row));
}

ParametricZone zone_with_rows(VarSpacePtr space, std::vector<LinRow> rows) {
    ParametricZone z(std::move(space));
    z.rows_ = std::move(rows);
    zone_reduce(z);
    return z;
}

// ---------------------------------------------------------------------------
// Exact rational simplex (feasibility / optimization on x >= 0, A x <= b)
// ---------------------------------------------------------------------------

namespace {

// Overflow signal for the machine-word rational fast path.
struct RatOverflow {};

// Rational on int64 with checked arithmetic. Values in the simplex stay tiny
// for the zones this engine produces; on overflow the caller falls back to
// the GMP tableau.
struct Rat64 {
    int64_t n = 0;
    int64_t d = 1;

    Rat64() = default;
    Rat64(int64_t v) : n(v), d(1) {}

    static int64_t checked(__int128 v) {
        if (v > INT64_MAX || v < INT64_MIN) throw RatOverflow{};
        return static_cast<int64_t>(v);
    }
    static uint64_t uabs(__int128 v) {
        __int128 a = v < 0 ? -v : v;
        if (a > INT64_MAX) throw RatOverflow{};
        return static_cast<uint64_t>(a);
    }
    static Rat64 make(__int128 num, __int128 den) {
        if (den == 0) throw RatOverflow{};
        if (den < 0) {
            num = -num;
            den = -den;
        }
        if (num == 0) return Rat64(0);
        uint64_t g = std::gcd(uabs(num), uabs(den));
        Rat64 r;
        r.n = checked(num / static_cast<__int128>(g));
        r.d = checked(den / static_cast<__int128>(g));
        return r;
    }
    static Rat64 from_rat(const Rat& q) {
        if (!q.is_small()) throw RatOverflow{};
        Rat64 r;
        r.n = q.small_num();
        r.d = q.small_den();
        return r;
    }
    friend Rat64 operator+(const Rat64& a, const Rat64& b) {
        if (a.d == 1 && b.d == 1) {
            Rat64 r;
            r.n = checked(static_cast<__int128>(a.n) + b.n);
            return r;
        }
        return make(static_cast<__int128>(a.n) * b.d + static_cast<__int128>(b.n) * a.d,
                    static_cast<__int128>(a.d) * b.d);
    }
    friend Rat64 operator-(const Rat64& a, const Rat64& b) {
        if (a.d == 1 && b.d == 1) {
            Rat64 r;
            r.n = checked(static_cast<__int128>(a.n) - b.n);
            return r;
        }
        return make(static_cast<__int128>(a.n) * b.d - static_cast<__int128>(b.n) * a.d,
                    static_cast<__int128>(a.d) * b.d);
    }
    friend Rat64 operator*(const Rat64& a, const Rat64& b) {
        if (a.n == 0 || b.n == 0) return Rat64(0);
        if (a.d == 1 && b.d == 1) {
            Rat64 r;
            r.n = checked(static_cast<__int128>(a.n) * b.n);
            return r;
        }
        // cross-reduce to keep intermediates small
        uint64_t g1 = std::gcd(uabs(a.n), static_cast<uint64_t>(b.d));
        uint64_t g2 = std::gcd(uabs(b.n), static_cast<uint64_t>(a.d));
        int64_t an = a.n / static_cast<int64_t>(g1);
        int64_t bd = b.d / static_cast<int64_t>(g1);
        int64_t bn = b.n / static_cast<int64_t>(g2);
        int64_t ad = a.d / static_cast<int64_t>(g2);
        Rat64 r;
        r.n = checked(static_cast<__int128>(an) * bn);
        r.d = checked(static_cast<__int128>(ad) * bd);
        return r;
    }
    Rat64 inverse() const {
        if (n == 0) throw RatOverflow{};
        Rat64 r;
        if (n < 0) {
            if (n == INT64_MIN) throw RatOverflow{};
            r.n = -d;
            r.d = -n;
        } else {
            r.n = d;
            r.d = n;
        }
        return r;
    }
    Rat64 operator-() const {
        Rat64 r;
        r.n = -n;
        r.d = d;
        return r;
    }
    Rat64& operator-=(const Rat64& o) { return *this = *this - o; }
    Rat64& operator*=(const Rat64& o) { return *this = *this * o; }
    bool is_zero() const { return n == 0; }
    int sign() const { return n > 0 ? 1 : (n < 0 ? -1 : 0); }
    friend int ratcmp(const Rat64& a, const Rat64& b) {
        __int128 l = static_cast<__int128>(a.n) * b.d;
        __int128 r = static_cast<__int128>(b.n) * a.d;
        return l < r ? -1 : (l > r ? 1 : 0);
    }
    Rational to_mpq() const { return make_rational(n, d); }
};

inline int ratcmp(const Rat& a, const Rat& b) { return rat_cmp(a, b); }
inline bool rat_is_zero(const Rat& a) { return a.is_zero(); }
inline bool rat_is_zero(const Rat64& a) { return a.is_zero(); }
inline int rat_sign(const Rat& a) { return a.sign(); }
inline int rat_sign(const Rat64& a) { return a.sign(); }
inline Rat rat_inverse(const Rat& a) { return a.inverse(); }
inline Rat64 rat_inverse(const Rat64& a) { return a.inverse(); }

// Dictionary simplex with Bland's rule; exact arithmetic, so no epsilons and
// guaranteed termination.
template <typename T>
class Simplex {
public:
    // maximize c.x subject to A x <= b, x >= 0
    Simplex(const std::vector<std::vector<T>>& A, const std::vector<T>& b,
            const std::vector<T>& c)
        : m_(b.size()), n_(c.size()), basic_(m_), nonbasic_(n_ + 1),
          tab_(m_ + 2, std::vector<T>(n_ + 2, T(0))) {
        for (size_t i = 0; i < m_; ++i) {
            for (size_t j = 0; j < n_; ++j) tab_[i][j] = A[i][j];
            basic_[i] = static_cast<long>(n_ + i);
            tab_[i][n_] = T(-1);  // auxiliary x0 column
            tab_[i][n_ + 1] = b[i];
        }
        for (size_t j = 0; j < n_; ++j) {
            nonbasic_[j] = static_cast<long>(j);
            tab_[m_][j] = -c[j];
        }
        nonbasic_[n_] = -1;        // x0
        tab_[m_ + 1][n_] = T(1);   // phase-1 objective: minimize x0
    }

    enum class Status { Infeasible, Unbounded, Optimal };

    // Reads the current basic solution for the first `nvars` variables.
    void extract_point(std::vector<T>& x, size_t nvars) const {
        x.assign(nvars, T(0));
        for (size_t i = 0; i < m_; ++i)
            if (basic_[i] >= 0 && basic_[i] < static_cast<long>(nvars))
                x[static_cast<size_t>(basic_[i])] = tab_[i][n_ + 1];
    }

    Status solve(T& value) {
        size_t r = 0;
        for (size_t i = 1; i < m_; ++i)
            if (ratcmp(tab_[i][n_ + 1], tab_[r][n_ + 1]) < 0) r = i;
        if (m_ > 0 && rat_sign(tab_[r][n_ + 1]) < 0) {
            pivot(r, n_);
            run(1);
            if (rat_sign(tab_[m_ + 1][n_ + 1]) < 0) return Status::Infeasible;
            for (size_t i = 0; i < m_; ++i) {
                if (basic_[i] == -1) {
                    // pivot x0 out on any nonzero column
                    size_t s = n_ + 1;
                    for (size_t j = 0; j <= n_; ++j) {
                        if (!rat_is_zero(tab_[i][j]) &&
                            (s == n_ + 1 || nonbasic_[j] < nonbasic_[s]))
                            s = j;
                    }
                    assert(s != n_ + 1);
                    pivot(i, s);
                }
            }
        }
        if (!run(2)) return Status::Unbounded;
        value = tab_[m_][n_ + 1];
        return Status::Optimal;
    }

private:
    void pivot(size_t r, size_t s) {
        T inv = rat_inverse(tab_[r][s]);
        for (size_t i = 0; i < m_ + 2; ++i) {
            if (i == r || rat_is_zero(tab_[i][s])) continue;
            T factor = tab_[i][s] * inv;
            for (size_t j = 0; j < n_ + 2; ++j) {
                if (j == s) continue;
                if (!rat_is_zero(tab_[r][j])) tab_[i][j] -= factor * tab_[r][j];
            }
        }
        for (size_t j = 0; j < n_ + 2; ++j)
            if (j != s) tab_[r][j] *= inv;
        for (size_t i = 0; i < m_ + 2; ++i)
            if (i != r) tab_[i][s] *= -inv;
        tab_[r][s] = inv;
        std::swap(basic_[r], nonbasic_[s]);
    }

    bool run(int phase) {
        size_t obj = m_ + (phase == 1 ? 1 : 0);
        while (true) {
            size_t s = n_ + 1;
            for (size_t j = 0; j <= n_; ++j) {
                if (phase == 2 && nonbasic_[j] == -1) continue;
                if (rat_sign(tab_[obj][j]) < 0 && (s == n_ + 1 || nonbasic_[j] < nonbasic_[s]))
                    s = j;
            }
            if (s == n_ + 1) return true;
            size_t r = m_;
            for (size_t i = 0; i < m_; ++i) {
                if (rat_sign(tab_[i][s]) <= 0) continue;
                if (r == m_) {
                    r = i;
                    continue;
                }
                int c = ratcmp(tab_[i][n_ + 1] * tab_[r][s], tab_[r][n_ + 1] * tab_[i][s]);
                if (c < 0 || (c == 0 && basic_[i] < basic_[r])) r = i;
            }
            if (r == m_) return false;
            pivot(r, s);
        }
    }

    size_t m_, n_;
    std::vector<long> basic_, nonbasic_;
    std::vector<std::vector<T>> tab_;
};

template <typename T>
T rat_convert(const Rat& q) {
    if constexpr (std::is_same_v<T, Rat64>)
        return Rat64::from_rat(q);
    else
        return q;
}

// Feasibility of the rows over the non-negative orthant, strict rows honored
// by maximizing a capped slack variable. Optionally reports a point of the
// solution set (strictly inside the strict rows).
template <typename T>
bool rows_feasible_impl(const std::vector<LinRow>& rows, size_t nvars,
                        std::vector<Rat>* witness = nullptr) {
    bool any_strict =
        std::any_of(rows.begin(), rows.end(), [](const LinRow& r) { return r.rel == Rel::Lt; });
    size_t cols = nvars + (any_strict ? 1 : 0);
    std::vector<std::vector<T>> A;
    std::vector<T> b;
    auto push = [&](const LinRow& row, bool negate, bool strict) {
        std::vector<T> r(cols, T(0));
        for (size_t i = 0; i < nvars; ++i)
            r[i] = negate ? rat_convert<T>(-row.coef[i]) : rat_convert<T>(row.coef[i]);
        if (strict) r[nvars] = T(1);
        A.push_back(std::move(r));
        b.push_back(negate ? rat_convert<T>(-row.rhs) : rat_convert<T>(row.rhs));
    };
    for (const auto& row : rows) {
        switch (row.rel) {
            case Rel::Le: push(row, false, false); break;
            case Rel::Lt: push(row, false, true); break;
            case Rel::Eq:
                push(row, false, false);
                push(row, true, false);
                break;
        }
    }
    if (any_strict) {
        // cap epsilon at 1 so the optimum is finite; nonempty iff max eps > 0
        std::vector<T> cap(cols, T(0));
        cap[nvars] = T(1);
        A.push_back(std::move(cap));
        b.push_back(T(1));
    }
    std::vector<T> obj(cols, T(0));
    if (any_strict) obj[nvars] = T(1);
    T value(0);
    Simplex<T> lp(A, b, obj);
    auto st = lp.solve(value);
    if (st == Simplex<T>::Status::Infeasible) return false;
    bool ok = !any_strict || st == Simplex<T>::Status::Unbounded || rat_sign(value) > 0;
    if (ok && witness != nullptr) {
        std::vector<T> x;
        lp.extract_point(x, nvars);
        witness->clear();
        witness->reserve(nvars);
        for (const auto& v : x) {
            if constexpr (std::is_same_v<T, Rat64>)
                witness->push_back(Rat(v.to_mpq()));
            else
                witness->push_back(v);
        }
    }
    return ok;
}

bool rows_feasible(const std::vector<LinRow>& rows, size_t nvars,
                   std::vector<Rat>* witness = nullptr) {
    try {
        return rows_feasible_impl<Rat64>(rows, nvars, witness);
    } catch (const RatOverflow&) {
        return rows_feasible_impl<Rat>(rows, nvars, witness);
    }
}

}  // namespace

bool zone_is_empty(const ParametricZone& z) {
    if (z.marked_empty()) return true;
    if (z.rows().empty()) return false;
    return !rows_feasible(z.rows(), z.space()->size());
}

std::optional<std::vector<Rat>> zone_feasible_point(const ParametricZone& z) {
    if (z.marked_empty()) return std::nullopt;
    std::vector<Rat> w;
    if (z.rows().empty()) {
        w.assign(z.space()->size(), Rat(0));
        return w;
    }
    if (!rows_feasible(z.rows(), z.space()->size(), &w)) return std::nullopt;
    return w;
}

ParametricZone zone_intersect(const ParametricZone& a, const ParametricZone& b) {
    assert(a.space() && b.space() && *a.space() == *b.space());
    if (a.marked_empty()) return a;
    if (b.marked_empty()) return b;
    std::vector<LinRow> rows = a.rows();
    rows.insert(rows.end(), b.rows().begin(), b.rows().end());
    return zone_with_rows(a.space(), std::move(rows));
}

namespace {

LinRow negate_row(const LinRow& row) {
    LinRow out;
    out.coef.resize(row.coef.size());
    for (size_t i = 0; i < row.coef.size(); ++i) out.coef[i] = -row.coef[i];
    out.rhs = -row.rhs;
    out.rel = row.rel == Rel::Le ? Rel::Lt : Rel::Le;  // not for Eq
    return out;
}

bool entails_ineq(const ParametricZone& z, const LinRow& row) {
    // constant rows
    if (all_zero(row.coef)) {
        if (row.rel == Rel::Lt) return row.rhs.sign() > 0;
        return row.rhs.sign() >= 0;
    }
    // syntactic dominance: an existing row with the same direction and a
    // bound at least as tight
    for (const auto& have : z.rows()) {
        if (have.rel == Rel::Eq) continue;
        size_t lead = first_nonzero(have.coef);
        size_t lead2 = first_nonzero(row.coef);
        if (lead != lead2) continue;
        Rat k = row.coef[lead2] / have.coef[lead];
        if (k.sign() <= 0) continue;
        bool same = true;
        for (size_t i = 0; i < row.coef.size(); ++i) {
            if (have.coef[i] * k != row.coef[i]) {
                same = false;
                break;
            }
        }
        if (!same) continue;
        Rat bound = have.rhs * k;
        int c = rat_cmp(bound, row.rhs);
        if (c < 0) return true;
        if (c == 0 && (row.rel == Rel::Le || have.rel == Rel::Lt)) return true;
    }
    std::vector<LinRow> rows = z.rows();
    rows.push_back(negate_row(row));
    return !rows_feasible(rows, z.space()->size());
}

}  // namespace

bool zone_entails(const ParametricZone& z, const LinRow& row) {
    if (z.marked_empty()) return true;
    if (row.rel == Rel::Eq) {
        LinRow le{row.coef, Rel::Le, row.rhs};
        if (!entails_ineq(z, le)) return false;
        LinRow ge = le;
        for (auto& c : ge.coef) c = -c;
        ge.rhs = -ge.rhs;
        return entails_ineq(z, ge);
    }
    return entails_ineq(z, row);
}

bool zone_includes(const ParametricZone& z1, const ParametricZone& z2) {
    assert(*z1.space() == *z2.space());
    if (z1.marked_empty()) return true;
    if (z2.marked_empty()) return zone_is_empty(z1);
    // fast paths on the reduced, sorted row lists: identical rows, or the
    // constraints of z2 a syntactic subset of those of z1
    if (z1.rows() == z2.rows()) return true;
    {
        const auto& r1 = z1.rows();
        const auto& r2 = z2.rows();
        size_t i = 0;
        bool subset = true;
        for (const auto& row : r2) {
            while (i < r1.size() && compare_rows(r1[i], row) < 0) ++i;
            if (i == r1.size() || !(r1[i] == row)) {
                subset = false;
                break;
            }
        }
        if (subset) return true;
    }
    if (zone_is_empty(z1)) return true;
    for (const auto& row : z2.rows())
        if (!zone_entails(z1, row)) return false;
    return true;
}

bool zone_semantically_equal(const ParametricZone& a, const ParametricZone& b) {
    return zone_includes(a, b) && zone_includes(b, a);
}

// ---------------------------------------------------------------------------
// Variable elimination (Fourier-Motzkin with equality substitution)
// ---------------------------------------------------------------------------

namespace {

// Eliminates variable `v` from `rows`, respecting the implicit v >= 0 bound.
// Contradictions surface later as constant rows.
void eliminate_one(std::vector<LinRow>& rows, size_t v, size_t nvars) {
    // Equality substitution if possible.
    size_t eq_idx = rows.size();
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].rel == Rel::Eq && !rows[i].coef[v].is_zero()) {
            eq_idx = i;
            break;
        }
    }
    auto nonneg_row = [&]() {
        LinRow r;
        r.coef.assign(nvars, Rat(0));
        r.coef[v] = Rat(-1);
        r.rel = Rel::Le;
        r.rhs = Rat(0);
        return r;
    };

    if (eq_idx != rows.size()) {
        LinRow eq = rows[eq_idx];
        rows.erase(rows.begin() + static_cast<long>(eq_idx));
        rows.push_back(nonneg_row());  // keep the implicit v >= 0 residue
        for (auto& row : rows) {
            if (row.coef[v].is_zero()) continue;
            Rat factor = -row.coef[v] / eq.coef[v];
            add_scaled(row, eq, factor);
        }
        return;
    }

    std::vector<LinRow> zero, pos, neg;
    for (auto& row : rows) {
        int s = sign_of(row.coef[v]);
        if (s == 0)
            zero.push_back(std::move(row));
        else if (s > 0)
            pos.push_back(std::move(row));
        else
            neg.push_back(std::move(row));
    }
    neg.push_back(nonneg_row());  // implicit v >= 0 joins the lower bounds
    std::vector<LinRow> out = std::move(zero);
    for (const auto& p : pos) {
        for (const auto& n : neg) {
            LinRow combo;
            combo.coef.assign(p.coef.size(), Rat(0));
            Rat pk = p.coef[v].inverse();
            Rat nk = -(n.coef[v].inverse());
            for (size_t i = 0; i < combo.coef.size(); ++i)
                combo.coef[i] = p.coef[i] * pk + n.coef[i] * nk;
            combo.rhs = p.rhs * pk + n.rhs * nk;
            combo.rel = (p.rel == Rel::Lt || n.rel == Rel::Lt) ? Rel::Lt : Rel::Le;
            combo.coef[v] = Rat(0);
            out.push_back(std::move(combo));
        }
    }
    rows = std::move(out);
}

}  // namespace

ParametricZone zone_eliminate(const ParametricZone& z, const std::vector<size_t>& vars) {
    if (z.marked_empty()) return z;
    std::vector<LinRow> rows = z.rows();
    for (size_t v : vars) {
        eliminate_one(rows, v, z.space()->size());
        ParametricZone tmp = zone_with_rows(z.space(), std::move(rows));
        if (tmp.marked_empty()) return tmp;
        rows = tmp.rows();
    }
    return zone_with_rows(z.space(), std::move(rows));
}

ParametricZone zone_reset(const ParametricZone& z, const std::vector<size_t>& clocks) {
    if (z.marked_empty() || clocks.empty()) return z;
    ParametricZone out = zone_eliminate(z, clocks);
    if (out.marked_empty()) return out;
    std::vector<LinRow> rows = out.rows();
    for (size_t c : clocks) {
        LinRow pin;
        pin.coef.assign(z.space()->size(), Rat(0));
        pin.coef[c] = Rat(1);
        pin.rel = Rel::Eq;
        pin.rhs = Rat(0);
        rows.push_back(std::move(pin));
    }
    return zone_with_rows(z.space(), std::move(rows));
}

ParametricZone zone_time_elapse(const ParametricZone& z, const ParametricZone& invariant) {
    assert(*z.space() == *invariant.space());
    if (z.marked_empty()) return z;
    const size_t n = z.space()->size();
    const size_t d = n;  // temporary delay column
    std::vector<LinRow> rows;
    rows.reserve(z.rows().size());
    for (const auto& row : z.rows()) {
        LinRow r;
        r.coef.assign(n + 1, Rat(0));
        Rat clocksum(0);
        for (size_t i = 0; i < n; ++i) {
            r.coef[i] = row.coef[i];
            if (z.space()->is_clock(i)) clocksum += row.coef[i];
        }
        r.coef[d] = -clocksum;
        r.rel = row.rel;
        r.rhs = row.rhs;
        rows.push_back(std::move(r));
    }
    eliminate_one(rows, d, n + 1);
    std::vector<LinRow> shrunk;
    shrunk.reserve(rows.size());
    for (auto& row : rows) {
        assert(row.coef[d].is_zero());
        row.coef.resize(n);
        shrunk.push_back(std::move(row));
    }
    ParametricZone out = zone_with_rows(z.space(), std::move(shrunk));
    return zone_intersect(out, invariant);
}

ParametricZone zone_project_params(const ParametricZone& z) {
    VarSpacePtr pspace = param_space_of(*z.space());
    if (z.marked_empty()) return ParametricZone::bottom(pspace);
    std::vector<size_t> clocks(z.space()->clock_count);
    for (size_t i = 0; i < clocks.size(); ++i) clocks[i] = i;
    ParametricZone wide = zone_eliminate(z, clocks);
    if (wide.marked_empty()) return ParametricZone::bottom(pspace);
    std::vector<LinRow> rows;
    for (const auto& row : wide.rows()) {
        LinRow r;
        r.coef.assign(pspace->size(), Rat(0));
        for (size_t i = 0; i < pspace->size(); ++i)
            r.coef[i] = row.coef[z.space()->clock_count + i];
        r.rel = row.rel;
        r.rhs = row.rhs;
        rows.push_back(std::move(r));
    }
    return zone_with_rows(pspace, std::move(rows));
}

namespace {

template <typename T>
std::optional<Rational> zone_min_impl(const ParametricZone& z, size_t var) {
    size_t nvars = z.space()->size();
    std::vector<std::vector<T>> A;
    std::vector<T> b;
    auto push = [&](const LinRow& row, bool negate) {
        std::vector<T> r(nvars, T(0));
        for (size_t i = 0; i < nvars; ++i)
            r[i] = negate ? rat_convert<T>(-row.coef[i]) : rat_convert<T>(row.coef[i]);
        A.push_back(std::move(r));
        b.push_back(negate ? rat_convert<T>(-row.rhs) : rat_convert<T>(row.rhs));
    };
    for (const auto& row : z.rows()) {
        push(row, false);
        if (row.rel == Rel::Eq) push(row, true);
    }
    std::vector<T> obj(nvars, T(0));
    obj[var] = T(-1);
    T value(0);
    auto st = Simplex<T>(A, b, obj).solve(value);
    if (st != Simplex<T>::Status::Optimal) return std::nullopt;
    if constexpr (std::is_same_v<T, Rat64>)
        return (-value).to_mpq();
    else
        return Rational(-value.to_mpq());
}

}  // namespace

std::optional<Rational> zone_min_of_var(const ParametricZone& z, size_t var) {
    if (zone_is_empty(z)) return std::nullopt;
    // minimize x_var == maximize -x_var over the non-strict relaxation; the
    // relaxation has the same infimum and our bounds are attained except on
    // strict rows, which the callers here do not mix with minimization.
    try {
        return zone_min_impl<Rat64>(z, var);
    } catch (const RatOverflow&) {
        return zone_min_impl<Rat>(z, var);
    }
}

bool zone_contains_point(const ParametricZone& z, const std::vector<Rat>& point) {
    if (z.marked_empty()) return false;
    for (const auto& v : point)
        if (v.sign() < 0) return false;
    for (const auto& row : z.rows()) {
        Rat lhs(0);
        for (size_t i = 0; i < row.coef.size(); ++i) {
            if (!row.coef[i].is_zero()) lhs += row.coef[i] * point[i];
        }
        int c = rat_cmp(lhs, row.rhs);
        switch (row.rel) {
            case Rel::Le: if (c > 0) return false; break;
            case Rel::Lt: if (c >= 0) return false; break;
            case Rel::Eq: if (c != 0) return false; break;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// One-direction convex merging
// ---------------------------------------------------------------------------

namespace {

// Half-open interval data over one direction.
struct DirInterval {
    bool has_lo = false, lo_strict = false;
    Rat lo;
    bool has_hi = false, hi_strict = false;
    Rat hi;
};

// Classifies a reduced row against a reference direction (lead entry +1).
// Returns 0: different direction, 1: upper bound, -1: lower bound, 2: equality.
int classify_row(const LinRow& row, const std::vector<Rat>& dir, size_t lead) {
    size_t l = first_nonzero(row.coef);
    if (l != lead) return 0;
    int s = row.coef[l].sign();
    for (size_t i = 0; i < row.coef.size(); ++i) {
        const Rat& want = dir[i];
        const Rat& have = row.coef[i];
        if (s > 0 ? have != want : have != -want) return 0;
    }
    if (row.rel == Rel::Eq) return 2;
    return s > 0 ? 1 : -1;
}

bool fold_interval(const std::vector<const LinRow*>& rows, const std::vector<Rat>& dir,
                   size_t lead, DirInterval& out) {
    for (const auto* row : rows) {
        int k = classify_row(*row, dir, lead);
        if (k == 0) return false;
        if (k == 2) {
            Rat v = row->coef[lead].sign() > 0 ? row->rhs : -row->rhs;
            out.has_lo = out.has_hi = true;
            out.lo = v;
            out.hi = v;
            out.lo_strict = out.hi_strict = false;
        } else if (k == 1) {
            out.has_hi = true;
            out.hi = row->rhs;
            out.hi_strict = row->rel == Rel::Lt;
        } else {
            out.has_lo = true;
            out.lo = -row->rhs;
            out.lo_strict = row->rel == Rel::Lt;
        }
    }
    return true;
}

// gap between (.., hi of one interval) and (lo of the other, ..)
bool interval_gap(const DirInterval& upper_side, const DirInterval& lower_side) {
    if (!upper_side.has_hi || !lower_side.has_lo) return false;
    int c = rat_cmp(upper_side.hi, lower_side.lo);
    if (c < 0) return true;
    if (c == 0 && upper_side.hi_strict && lower_side.lo_strict) return true;
    return false;
}

}  // namespace

std::optional<ParametricZone> zone_merge_one_direction(const ParametricZone& a,
                                                       const ParametricZone& b) {
    if (a.marked_empty() || b.marked_empty()) return std::nullopt;
    assert(*a.space() == *b.space());
    const auto& ra = a.rows();
    const auto& rb = b.rows();
    // merge-diff of the two sorted row lists
    std::vector<const LinRow*> only_a, only_b;
    std::vector<LinRow> common;
    size_t i = 0, j = 0;
    while (i < ra.size() || j < rb.size()) {
        if (i == ra.size()) {
            only_b.push_back(&rb[j++]);
        } else if (j == rb.size()) {
            only_a.push_back(&ra[i++]);
        } else {
            int c = compare_rows(ra[i], rb[j]);
            if (c == 0) {
                common.push_back(ra[i]);
                ++i;
                ++j;
            } else if (c < 0) {
                only_a.push_back(&ra[i++]);
            } else {
                only_b.push_back(&rb[j++]);
            }
        }
    }
    if (only_a.empty() || only_b.empty()) return std::nullopt;  // inclusion, not a merge
    if (only_a.size() > 2 || only_b.size() > 2) return std::nullopt;

    // reference direction from the first differing row
    const LinRow& ref = *only_b.front();
    size_t lead = first_nonzero(ref.coef);
    if (lead == ref.coef.size()) return std::nullopt;
    std::vector<Rat> dir(ref.coef.size());
    bool neg = ref.coef[lead].sign() < 0;
    for (size_t k = 0; k < dir.size(); ++k) dir[k] = neg ? -ref.coef[k] : ref.coef[k];

    DirInterval ia, ib;
    if (!fold_interval(only_a, dir, lead, ia)) return std::nullopt;
    if (!fold_interval(only_b, dir, lead, ib)) return std::nullopt;
    if (interval_gap(ia, ib) || interval_gap(ib, ia)) return std::nullopt;

    // union interval: the weaker bound on each side
    DirInterval u;
    if (ia.has_lo && ib.has_lo) {
        int c = rat_cmp(ia.lo, ib.lo);
        u.has_lo = true;
        if (c < 0) {
            u.lo = ia.lo;
            u.lo_strict = ia.lo_strict;
        } else if (c > 0) {
            u.lo = ib.lo;
            u.lo_strict = ib.lo_strict;
        } else {
            u.lo = ia.lo;
            u.lo_strict = ia.lo_strict && ib.lo_strict;
        }
    }
    if (ia.has_hi && ib.has_hi) {
        int c = rat_cmp(ia.hi, ib.hi);
        u.has_hi = true;
        if (c > 0) {
            u.hi = ia.hi;
            u.hi_strict = ia.hi_strict;
        } else if (c < 0) {
            u.hi = ib.hi;
            u.hi_strict = ib.hi_strict;
        } else {
            u.hi = ia.hi;
            u.hi_strict = ia.hi_strict && ib.hi_strict;
        }
    }

    std::vector<LinRow> rows = std::move(common);
    if (u.has_lo) {
        LinRow lo;
        lo.coef.resize(dir.size());
        for (size_t k = 0; k < dir.size(); ++k) lo.coef[k] = -dir[k];
        lo.rel = u.lo_strict ? Rel::Lt : Rel::Le;
        lo.rhs = -u.lo;
        rows.push_back(std::move(lo));
    }
    if (u.has_hi) {
        LinRow hi;
        hi.coef = dir;
        hi.rel = u.hi_strict ? Rel::Lt : Rel::Le;
        hi.rhs = u.hi;
        rows.push_back(std::move(hi));
    }
    return zone_with_rows(a.space(), std::move(rows));
}

// ---------------------------------------------------------------------------
// Canonical form
// ---------------------------------------------------------------------------

namespace {

// Scales a row to coprime integer coefficients (positive scale only).
LinRow integer_normalize(const LinRow& row) {
    mpz_class lcm_den = 1;
    auto fold = [&](const Rat& r) { lcm_den = lcm(lcm_den, r.to_mpq().get_den()); };
    for (const auto& c : row.coef) fold(c);
    fold(row.rhs);
    mpz_class g = 0;
    auto fold_num = [&](const Rat& r) {
        Rational q = r.to_mpq();
        mpz_class scaled = q.get_num() * (lcm_den / q.get_den());
        g = gcd(g, scaled);
    };
    for (const auto& c : row.coef) fold_num(c);
    fold_num(row.rhs);
    if (g == 0) g = 1;
    LinRow out;
    out.rel = row.rel;
    out.coef.resize(row.coef.size());
    Rat scale{Rational(Rational(lcm_den) / Rational(g))};
    for (size_t i = 0; i < row.coef.size(); ++i) out.coef[i] = row.coef[i] * scale;
    out.rhs = row.rhs * scale;
    return out;
}

}  // namespace

ParametricZone zone_drop_redundant(const ParametricZone& z) {
    if (z.marked_empty() || z.rows().size() <= 1) return z;
    std::vector<LinRow> kept = z.rows();
    for (size_t i = kept.size(); i-- > 0;) {
        std::vector<LinRow> rest;
        rest.reserve(kept.size() - 1);
        for (size_t j = 0; j < kept.size(); ++j)
            if (j != i) rest.push_back(kept[j]);
        ParametricZone zr = zone_with_rows(z.space(), rest);
        if (zone_entails(zr, kept[i])) kept = std::move(rest);
    }
    return zone_with_rows(z.space(), std::move(kept));
}

ParametricZone zone_canonical(const ParametricZone& z) {
    if (zone_is_empty(z)) return ParametricZone::bottom(z.space());
    const size_t n = z.space()->size();

    // split into equalities (explicit and implicit) and inequalities
    std::vector<LinRow> eqs, ineqs;
    for (const auto& row : z.rows()) {
        if (row.rel == Rel::Eq) {
            eqs.push_back(row);
        } else if (row.rel == Rel::Le) {
            LinRow rev;
            rev.coef.resize(n);
            for (size_t i = 0; i < n; ++i) rev.coef[i] = -row.coef[i];
            rev.rel = Rel::Le;
            rev.rhs = -row.rhs;
            if (zone_entails(z, rev))
                eqs.push_back({row.coef, Rel::Eq, row.rhs});
            else
                ineqs.push_back(row);
        } else {
            ineqs.push_back(row);
        }
    }
    // Detect variables pinned only by the implicit lower bound (x <= 0 with
    // implicit x >= 0): already handled, x <= 0 entails -x <= 0? No: the
    // reverse of (x <= 0) is (-x <= 0), entailed by non-negativity, so such
    // rows became equalities above.

    // reduced row echelon form of the equalities
    std::vector<LinRow> basis;
    for (auto eq : eqs) {
        for (const auto& b : basis) {
            size_t pv = first_nonzero(b.coef);
            if (!eq.coef[pv].is_zero()) add_scaled(eq, b, -eq.coef[pv] / b.coef[pv]);
        }
        size_t lead = first_nonzero(eq.coef);
        if (lead == eq.coef.size()) continue;  // dependent
        Rat inv = eq.coef[lead].inverse();
        for (auto& c : eq.coef) c *= inv;
        eq.rhs *= inv;
        for (auto& b : basis) {
            if (!b.coef[lead].is_zero()) add_scaled(b, eq, -b.coef[lead]);
        }
        basis.push_back(std::move(eq));
    }
    std::sort(basis.begin(), basis.end(), [](const LinRow& a, const LinRow& b) {
        return first_nonzero(a.coef) < first_nonzero(b.coef);
    });

    // reduce inequalities modulo the equality basis
    for (auto& row : ineqs) {
        for (const auto& b : basis) {
            size_t pv = first_nonzero(b.coef);
            if (!row.coef[pv].is_zero()) add_scaled(row, b, -row.coef[pv]);
        }
    }

    ParametricZone base = zone_with_rows(z.space(), ineqs);  // dedupes directions
    if (base.marked_empty()) return ParametricZone::bottom(z.space());
    ineqs = base.rows();
    for (const auto& b : basis) ineqs.push_back(b);  // context for entailment

    // drop inequalities entailed by the rest (with implicit non-negativity)
    std::vector<LinRow> kept = ineqs;
    size_t n_ineq = base.rows().size();
    for (size_t i = n_ineq; i-- > 0;) {
        LinRow candidate = kept[i];
        std::vector<LinRow> rest;
        rest.reserve(kept.size() - 1);
        for (size_t j = 0; j < kept.size(); ++j)
            if (j != i) rest.push_back(kept[j]);
        ParametricZone zr = zone_with_rows(z.space(), rest);
        if (zone_entails(zr, candidate)) kept = std::move(rest);
    }

    std::vector<LinRow> out;
    for (const auto& b : basis) out.push_back(integer_normalize(b));
    std::vector<LinRow> fin;
    for (const auto& row : kept)
        if (row.rel != Rel::Eq) fin.push_back(integer_normalize(row));
    std::sort(fin.begin(), fin.end(),
              [](const LinRow& a, const LinRow& b) { return compare_rows(a, b) < 0; });
    out.insert(out.end(), fin.begin(), fin.end());

    ParametricZone result(z.space());
    return zone_with_rows(z.space(), std::move(out));
}

// ---------------------------------------------------------------------------
// Display
// ---------------------------------------------------------------------------

std::string row_to_string(const LinRow& row, const std::vector<std::string>& names) {
    LinRow r = integer_normalize(row);
    bool flip = false;
    if (r.rhs.sign() < 0) flip = true;
    if (r.rel == Rel::Eq && first_nonzero(r.coef) < r.coef.size() &&
        r.coef[first_nonzero(r.coef)].sign() < 0)
        flip = true;
    if (flip) {
        for (auto& c : r.coef) c = -c;
        r.rhs = -r.rhs;
    }
    std::ostringstream lhs, rhs;
    bool lhs_any = false, rhs_any = false;
    auto term = [&](std::ostringstream& os, bool& any, const Rat& coef, const std::string& n) {
        if (any) os << " + ";
        if (coef != Rat(1)) os << rational_to_string(coef.to_mpq()) << "*";
        os << n;
        any = true;
    };
    for (size_t i = 0; i < r.coef.size(); ++i) {
        if (r.coef[i].sign() > 0)
            term(lhs, lhs_any, r.coef[i], names[i]);
        else if (r.coef[i].sign() < 0)
            term(rhs, rhs_any, -r.coef[i], names[i]);
    }
    if (!lhs_any) lhs << "0";
    if (!r.rhs.is_zero() || !rhs_any) {
        if (rhs_any) rhs << " + ";
        rhs << rational_to_string(r.rhs.to_mpq());
    }
    const char* op = nullptr;
    switch (r.rel) {
        case Rel::Le: op = flip ? ">=" : "<="; break;
        case Rel::Lt: op = flip ? ">" : "<"; break;
        case Rel::Eq: op = "="; break;
    }
    return lhs.str() + " " + op + " " + rhs.str();
}

std::string zone_to_string(const ParametricZone& z) {
    ParametricZone c = zone_canonical(z);
    if (c.marked_empty()) return "false";
    if (c.rows().empty()) return "true";
    std::string out;
    for (size_t i = 0; i < c.rows().size(); ++i) {
        if (i) out += " && ";
        out += row_to_string(c.rows()[i], c.space()->names);
    }
    return out;
}

}  // namespace rail
