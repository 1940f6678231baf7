#include "tamb/zmodule.hpp"

#include <algorithm>

namespace tamb {

ZMat zmat_identity(int n) {
    ZMat a(n, ZVec(n, 0));
    for (int i = 0; i < n; ++i) a[i][i] = 1;
    return a;
}

ZMat zmat_mul(const ZMat& a, const ZMat& b) {
    if (a.empty() || b.empty()) return ZMat(a.size(), ZVec(b.empty() ? 0 : b[0].size(), 0));
    size_t n = a.size(), k = b.size(), m = b[0].size();
    ZMat c(n, ZVec(m, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t t = 0; t < k; ++t) {
            if (a[i][t] == 0) continue;
            for (size_t j = 0; j < m; ++j) c[i][j] += a[i][t] * b[t][j];
        }
    return c;
}

ZVec zmat_apply(const ZMat& a, const ZVec& v) {
    ZVec out(a.size(), 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j)
            if (a[i][j] != 0) out[i] += a[i][j] * v[j];
    return out;
}

mpz_class zmat_det(ZMat a) {
    // Bareiss fraction-free elimination
    int n = (int)a.size();
    if (n == 0) return 1;
    mpz_class prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            int sw = -1;
            for (int i = k + 1; i < n; ++i)
                if (a[i][k] != 0) { sw = i; break; }
            if (sw < 0) return 0;
            std::swap(a[k], a[sw]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

SmithResult smith_normal_form(const ZMat& a) {
    int m = (int)a.size();
    int n = m ? (int)a[0].size() : 0;
    SmithResult r;
    r.D = a;
    r.U = zmat_identity(m);
    r.V = zmat_identity(n);
    auto& D = r.D;
    auto row_sub = [&](int dst, int src, const mpz_class& c) { // row_dst -= c*row_src
        for (int j = 0; j < n; ++j) D[dst][j] -= c * D[src][j];
        for (int j = 0; j < m; ++j) r.U[dst][j] -= c * r.U[src][j];
    };
    auto col_sub = [&](int dst, int src, const mpz_class& c) {
        for (int i = 0; i < m; ++i) D[i][dst] -= c * D[i][src];
        for (int i = 0; i < n; ++i) r.V[i][dst] -= c * r.V[i][src];
    };
    auto row_swap = [&](int i, int j) {
        std::swap(D[i], D[j]);
        std::swap(r.U[i], r.U[j]);
    };
    auto col_swap = [&](int i, int j) {
        for (int k = 0; k < m; ++k) std::swap(D[k][i], D[k][j]);
        for (int k = 0; k < n; ++k) std::swap(r.V[k][i], r.V[k][j]);
    };
    auto row_neg = [&](int i) {
        for (int j = 0; j < n; ++j) D[i][j] = -D[i][j];
        for (int j = 0; j < m; ++j) r.U[i][j] = -r.U[i][j];
    };

    int t = 0;
    while (t < std::min(m, n)) {
        // pivot: minimal nonzero absolute value in the trailing submatrix
        int pi = -1, pj = -1;
        mpz_class best;
        for (int i = t; i < m; ++i)
            for (int j = t; j < n; ++j)
                if (D[i][j] != 0) {
                    mpz_class v = abs(D[i][j]);
                    if (pi < 0 || v < best) { best = v; pi = i; pj = j; }
                }
        if (pi < 0) break;
        row_swap(t, pi);
        col_swap(t, pj);
        bool clean = false;
        while (!clean) {
            clean = true;
            for (int i = t + 1; i < m; ++i) {
                while (D[i][t] != 0) {
                    mpz_class q;
                    mpz_fdiv_q(q.get_mpz_t(), D[i][t].get_mpz_t(), D[t][t].get_mpz_t());
                    row_sub(i, t, q);
                    if (D[i][t] != 0) { row_swap(i, t); clean = false; }
                }
            }
            for (int j = t + 1; j < n; ++j) {
                while (D[t][j] != 0) {
                    mpz_class q;
                    mpz_fdiv_q(q.get_mpz_t(), D[t][j].get_mpz_t(), D[t][t].get_mpz_t());
                    col_sub(j, t, q);
                    if (D[t][j] != 0) { col_swap(j, t); clean = false; }
                }
            }
            if (clean) {
                // pivot must divide the rest of the submatrix
                for (int i = t + 1; i < m && clean; ++i)
                    for (int j = t + 1; j < n && clean; ++j)
                        if (D[i][j] % D[t][t] != 0) {
                            row_sub(t, i, -1); // add row i; reopens the column phase
                            clean = false;
                        }
            }
        }
        if (D[t][t] < 0) row_neg(t);
        ++t;
    }
    return r;
}

PresentedZModule::PresentedZModule(int ngens, ZMat relations) : ngens_(ngens), rels_(std::move(relations)) {
    for (const auto& row : rels_)
        if ((int)row.size() != ngens_) throw DimensionMismatch("relation width != ngens");
}

void PresentedZModule::ensure_snf() const {
    if (have_snf_) return;
    if (rels_.empty()) {
        snf_.U = zmat_identity(0);
        snf_.D = ZMat{};
        snf_.V = zmat_identity(ngens_);
    } else {
        snf_ = smith_normal_form(rels_);
    }
    diag_.clear();
    torsion_.clear();
    int m = (int)rels_.size();
    int lim = std::min(m, ngens_);
    for (int i = 0; i < lim; ++i) {
        const mpz_class& d = snf_.D[i][i];
        if (d != 0) diag_.push_back(d);
    }
    rank_ = (int)diag_.size();
    for (const auto& d : diag_)
        if (d > 1) torsion_.push_back(d);
    have_snf_ = true;
}

const std::vector<mpz_class>& PresentedZModule::torsion() const {
    ensure_snf();
    return torsion_;
}

int PresentedZModule::free_rank() const {
    ensure_snf();
    return ngens_ - rank_;
}

int PresentedZModule::min_generators() const {
    ensure_snf();
    return free_rank() + (int)torsion_.size();
}

bool PresentedZModule::contains(const ZVec& x) const {
    if ((int)x.size() != ngens_) throw DimensionMismatch("contains");
    ensure_snf();
    // x in rowspan(R) iff x*V lies in rowspan(D)
    ZVec z(ngens_, 0);
    for (int j = 0; j < ngens_; ++j)
        for (int i = 0; i < ngens_; ++i)
            if (snf_.V[i][j] != 0) z[j] += x[i] * snf_.V[i][j];
    for (int j = 0; j < ngens_; ++j) {
        if (j < rank_) {
            if (z[j] % diag_[j] != 0) return false;
        } else if (z[j] != 0) {
            return false;
        }
    }
    return true;
}

bool PresentedZModule::equal(const ZVec& a, const ZVec& b) const {
    ZVec d(ngens_);
    for (int i = 0; i < ngens_; ++i) d[i] = a[i] - b[i];
    return contains(d);
}

std::pair<PresentedZModule, TensorIndex> tensor(const PresentedZModule& m, const PresentedZModule& n) {
    TensorIndex ix{m.ngens(), n.ngens()};
    int g = m.ngens() * n.ngens();
    ZMat rels;
    for (const auto& r : m.relations())
        for (int j = 0; j < n.ngens(); ++j) {
            ZVec row(g, 0);
            for (int i = 0; i < m.ngens(); ++i) row[ix.of(i, j)] = r[i];
            rels.push_back(row);
        }
    for (const auto& r : n.relations())
        for (int i = 0; i < m.ngens(); ++i) {
            ZVec row(g, 0);
            for (int j = 0; j < n.ngens(); ++j) row[ix.of(i, j)] = r[j];
            rels.push_back(row);
        }
    return {PresentedZModule(g, rels), ix};
}

PresentedZModule tensor_many(const std::vector<const PresentedZModule*>& ms, std::vector<int>* strides) {
    if (ms.empty()) return PresentedZModule(1, {});
    int g = 1;
    for (auto* m : ms) g *= m->ngens();
    std::vector<int> str(ms.size(), 1);
    for (int i = (int)ms.size() - 2; i >= 0; --i) str[i] = str[i + 1] * ms[i + 1]->ngens();
    if (strides) *strides = str;
    ZMat rels;
    // relation r of factor t, inflated over all other indices
    for (size_t t = 0; t < ms.size(); ++t) {
        int outer = 1;
        for (size_t s = 0; s < ms.size(); ++s)
            if (s != t) outer *= ms[s]->ngens();
        for (const auto& r : ms[t]->relations()) {
            for (int o = 0; o < outer; ++o) {
                // decode o into indices of the other factors
                int rem = o, base = 0;
                for (size_t s = 0; s < ms.size(); ++s) {
                    if (s == t) continue;
                    int sz = ms[s]->ngens();
                    base += (rem % sz) * str[s];
                    rem /= sz;
                }
                ZVec row(g, 0);
                for (int i = 0; i < ms[t]->ngens(); ++i) row[base + i * str[t]] = r[i];
                rels.push_back(row);
            }
        }
    }
    return PresentedZModule(g, rels);
}

PresentedZModule quotient(const PresentedZModule& m, const ZMat& extra) {
    ZMat rels = m.relations();
    for (const auto& r : extra) {
        if ((int)r.size() != m.ngens()) throw DimensionMismatch("quotient");
        rels.push_back(r);
    }
    return PresentedZModule(m.ngens(), rels);
}

std::pair<PresentedZModule, DirectSumIndex> direct_sum(const std::vector<const PresentedZModule*>& ms) {
    DirectSumIndex ix;
    int g = 0;
    for (auto* m : ms) {
        ix.offset.push_back(g);
        g += m->ngens();
    }
    ZMat rels;
    for (size_t t = 0; t < ms.size(); ++t)
        for (const auto& r : ms[t]->relations()) {
            ZVec row(g, 0);
            for (int i = 0; i < ms[t]->ngens(); ++i) row[ix.offset[t] + i] = r[i];
            rels.push_back(row);
        }
    return {PresentedZModule(g, rels), ix};
}

bool is_iso(const PresentedZModule& m, const PresentedZModule& n) {
    return m.free_rank() == n.free_rank() && m.torsion() == n.torsion();
}

bool well_defined_hom(const PresentedZModule& src, const PresentedZModule& tgt, const ZMat& f) {
    if ((int)f.size() != tgt.ngens()) throw DimensionMismatch("hom rows");
    for (const auto& fr : f)
        if ((int)fr.size() != src.ngens()) throw DimensionMismatch("hom cols");
    for (const auto& r : src.relations()) {
        ZVec img(tgt.ngens(), 0);
        for (int i = 0; i < tgt.ngens(); ++i)
            for (int j = 0; j < src.ngens(); ++j)
                if (f[i][j] != 0) img[i] += f[i][j] * r[j];
        ZVec zero(tgt.ngens(), 0);
        if (!tgt.equal(img, zero)) return false;
    }
    return true;
}

ZMat zmat_from_ll(const std::vector<std::vector<long long>>& a) {
    ZMat out(a.size());
    for (size_t i = 0; i < a.size(); ++i) {
        out[i].resize(a[i].size());
        for (size_t j = 0; j < a[i].size(); ++j) out[i][j] = (long)a[i][j];
    }
    return out;
}

} // namespace tamb
