#include "afflab/func_span.hpp"

#include "afflab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace afflab {

namespace {

struct Key {
    CNum l1, l2;
    int i, j;
};

bool key_near(const Key& a, const Key& b) {
    return a.i == b.i && a.j == b.j && near(a.l1, b.l1, kExponentMergeTol) &&
           near(a.l2, b.l2, kExponentMergeTol);
}

int key_cmp(const Key& a, const Key& b) {
    if (int c = cmp(a.l1, b.l1)) return c;
    if (int c = cmp(a.l2, b.l2)) return c;
    if (a.i != b.i) return a.i < b.i ? -1 : 1;
    if (a.j != b.j) return a.j < b.j ? -1 : 1;
    return 0;
}

bool key_is_constant(const Key& k) {
    return k.i == 0 && k.j == 0 && k.l1.is_zero() && k.l2.is_zero();
}

// Sparse exp-polys as dense coefficient rows over a clustered key set.
struct KeyedMatrix {
    std::vector<Key> keys;
    std::vector<std::vector<CNum>> rows;
    bool exact = true;

    // const_first puts the constant-function key in column 0 so that row
    // reduction pivots on it first (used by factor_affine_chart).
    void build(const std::vector<const ExpPoly*>& funcs, bool const_first) {
        for (const auto* f : funcs) {
            for (const auto& t : f->terms()) {
                Key k{t.lam1, t.lam2, t.i, t.j};
                bool found = false;
                for (const auto& existing : keys)
                    if (key_near(existing, k)) {
                        found = true;
                        break;
                    }
                if (!found) keys.push_back(k);
                if (!t.coeff.is_exact() || !t.lam1.is_exact() || !t.lam2.is_exact())
                    exact = false;
            }
        }
        std::sort(keys.begin(), keys.end(),
                  [&](const Key& a, const Key& b) {
                      if (const_first) {
                          bool ca = key_is_constant(a), cb = key_is_constant(b);
                          if (ca != cb) return ca;
                      }
                      return key_cmp(a, b) < 0;
                  });
        for (const auto* f : funcs) rows.push_back(project(*f));
    }

    std::vector<CNum> project(const ExpPoly& f) const {
        std::vector<CNum> row(keys.size(), CNum(0));
        for (const auto& t : f.terms()) {
            Key k{t.lam1, t.lam2, t.i, t.j};
            bool placed = false;
            for (std::size_t c = 0; c < keys.size(); ++c)
                if (key_near(keys[c], k)) {
                    row[c] = row[c] + t.coeff;
                    placed = true;
                    break;
                }
            if (!placed) {
                // Caller must have included f's keys; treated as unreducible.
            }
        }
        return row;
    }

    ExpPoly to_poly(const std::vector<CNum>& row) const {
        std::vector<EpTerm> terms;
        for (std::size_t c = 0; c < row.size(); ++c)
            if (!row[c].is_zero())
                terms.push_back(EpTerm{row[c], keys[c].i, keys[c].j, keys[c].l1,
                                       keys[c].l2});
        return ExpPoly(std::move(terms));
    }
};

double row_max_abs(const std::vector<CNum>& row) {
    double m = 0;
    for (const auto& v : row) m = std::max(m, v.abs());
    return m;
}

// In-place Gauss-Jordan elimination. Exact path pivots on the first nonzero
// entry; float path takes the largest magnitude and zeroes columns below a
// relative threshold.
struct Rref {
    std::vector<std::vector<CNum>> rows;  // reduced nonzero rows
    std::vector<std::size_t> pivots;
    bool exact;

    void run(std::vector<std::vector<CNum>> input, bool exact_mode) {
        exact = exact_mode;
        // Normalize approximate rows for stable thresholds.
        if (!exact)
            for (auto& r : input) {
                double m = row_max_abs(r);
                if (m > 0)
                    for (auto& v : r) v = v * CNum(Num::approx(1.0 / m));
            }
        const std::size_t ncols = input.empty() ? 0 : input[0].size();
        std::size_t row = 0;
        for (std::size_t col = 0; col < ncols && row < input.size(); ++col) {
            std::size_t best = input.size();
            double best_mag = 0;
            for (std::size_t r = row; r < input.size(); ++r) {
                double mag = input[r][col].abs();
                if (exact ? !input[r][col].is_zero() : mag > best_mag) {
                    best = r;
                    best_mag = mag;
                    if (exact) break;
                }
            }
            if (best == input.size()) continue;
            if (!exact && best_mag < 1e-9) continue;
            std::swap(input[row], input[best]);
            CNum inv = CNum(Num(1)) / input[row][col];
            for (auto& v : input[row]) v = v * inv;
            input[row][col] = CNum(Num(1));
            for (std::size_t r = 0; r < input.size(); ++r) {
                if (r == row || input[r][col].is_zero()) continue;
                CNum factor = input[r][col];
                for (std::size_t c = 0; c < ncols; ++c)
                    input[r][c] = input[r][c] - factor * input[row][c];
                input[r][col] = CNum(0);
            }
            pivots.push_back(col);
            ++row;
        }
        input.resize(row);
        rows = std::move(input);
    }

    // Remaining residual after eliminating f against the reduced rows.
    std::vector<CNum> reduce(std::vector<CNum> f) const {
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const CNum& c = f[pivots[r]];
            if (c.is_zero()) continue;
            CNum factor = c;
            for (std::size_t k = 0; k < f.size(); ++k)
                f[k] = f[k] - factor * rows[r][k];
            f[pivots[r]] = CNum(0);
        }
        return f;
    }
};

}  // namespace

FuncSpan FuncSpan::canonicalize(std::vector<ExpPoly> funcs) {
    FuncSpan span;
    span.given_ = funcs;
    std::vector<const ExpPoly*> ptrs;
    for (const auto& f : funcs) ptrs.push_back(&f);
    KeyedMatrix m;
    m.build(ptrs, false);
    Rref rr;
    rr.run(m.rows, m.exact);
    for (const auto& row : rr.rows) span.basis_.push_back(m.to_poly(row));
    return span;
}

bool FuncSpan::contains(const ExpPoly& f, double tol) const {
    if (f.is_zero()) return true;
    std::vector<const ExpPoly*> ptrs;
    for (const auto& b : basis_) ptrs.push_back(&b);
    ptrs.push_back(&f);
    KeyedMatrix m;
    m.build(ptrs, false);
    std::vector<std::vector<CNum>> rows(m.rows.begin(), m.rows.end() - 1);
    Rref rr;
    rr.run(std::move(rows), m.exact);
    std::vector<CNum> frow = m.rows.back();
    if (!m.exact) {
        double mm = row_max_abs(frow);
        if (mm > 0)
            for (auto& v : frow) v = v * CNum(Num::approx(1.0 / mm));
    }
    std::vector<CNum> res = rr.reduce(std::move(frow));
    if (m.exact) {
        for (const auto& v : res)
            if (!v.is_zero()) return false;
        return true;
    }
    return row_max_abs(res) < tol;
}

FuncSpan FuncSpan::scaled_exp(const Num& w1, const Num& w2) const {
    ExpPoly g = ExpPoly::exponential(w1, w2);
    std::vector<ExpPoly> scaled;
    for (const auto& b : basis_) scaled.push_back(b * g);
    return canonicalize(std::move(scaled));
}

bool span_equal(const FuncSpan& a, const FuncSpan& b, double tol) {
    if (a.dim() != b.dim()) return false;
    for (const auto& f : b.basis())
        if (!a.contains(f, tol)) return false;
    for (const auto& f : a.basis())
        if (!b.contains(f, tol)) return false;
    return true;
}

AffineFactorization factor_affine_chart(const FuncSpan& span) {
    if (span.dim() != 3)
        throw FactorError("span must be 3-dimensional, got dim " +
                          std::to_string(span.dim()));
    // Candidate potentials: real exponents appearing in the basis.
    std::vector<std::pair<Num, Num>> candidates;
    for (const auto& b : span.basis())
        for (const auto& g : exponent_groups(b)) {
            if (!g.lam1.im.near_zero(1e-9) || !g.lam2.im.near_zero(1e-9)) continue;
            bool dup = false;
            for (const auto& c : candidates)
                if (near(c.first, g.lam1.re) && near(c.second, g.lam2.re)) {
                    dup = true;
                    break;
                }
            if (!dup) candidates.emplace_back(g.lam1.re, g.lam2.re);
        }
    // Prefer the smallest potential; charts stay best conditioned near the
    // origin and the choice is deterministic.
    std::sort(candidates.begin(), candidates.end(),
              [](const auto& a, const auto& b) {
                  double na = std::hypot(a.first.to_double(), a.second.to_double());
                  double nb = std::hypot(b.first.to_double(), b.second.to_double());
                  return na < nb;
              });
    for (const auto& [w1, w2] : candidates) {
        if (!span.contains(ExpPoly::exponential(w1, w2))) continue;
        // Normalize by exp(-g) and split off the constant function.
        std::vector<ExpPoly> normalized{ExpPoly::constant(Num(1))};
        ExpPoly inv = ExpPoly::exponential(-w1, -w2);
        for (const auto& b : span.basis()) normalized.push_back(b * inv);
        std::vector<const ExpPoly*> ptrs;
        for (const auto& f : normalized) ptrs.push_back(&f);
        KeyedMatrix m;
        m.build(ptrs, /*const_first=*/true);
        Rref rr;
        rr.run(m.rows, m.exact);
        if (rr.rows.size() != 3) continue;
        std::vector<ExpPoly> charts;
        for (std::size_t r = 0; r < rr.rows.size(); ++r)
            if (rr.pivots[r] != 0) charts.push_back(m.to_poly(rr.rows[r]));
        if (charts.size() != 2) continue;
        return AffineFactorization{w1, w2, charts[0], charts[1]};
    }
    throw FactorError("no exponential factor exposes the constant function");
}

}  // namespace afflab
