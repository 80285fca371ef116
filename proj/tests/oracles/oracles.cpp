#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace oracle {

double h2(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double entropy(const std::vector<double>& p) {
    double h = 0.0;
    for (double v : p)
        if (v > 0.0) h -= v * std::log2(v);
    return h;
}

double mutual_information(const std::vector<double>& px, const Table& w) {
    std::size_t ny = w.front().size();
    std::vector<double> py(ny, 0.0);
    for (std::size_t x = 0; x < px.size(); ++x)
        for (std::size_t y = 0; y < ny; ++y) py[y] += px[x] * w[x][y];
    double mi = 0.0;
    for (std::size_t x = 0; x < px.size(); ++x)
        for (std::size_t y = 0; y < ny; ++y) {
            double pxy = px[x] * w[x][y];
            if (pxy > 0.0) mi += pxy * std::log2(w[x][y] / py[y]);
        }
    return mi;
}

double conditional_bit_entropy(const std::vector<double>& px, const Table& w, const std::vector<int>& bit) {
    std::size_t ny = w.front().size();
    Table joint(2, std::vector<double>(ny, 0.0));
    for (std::size_t x = 0; x < px.size(); ++x)
        for (std::size_t y = 0; y < ny; ++y) joint[bit[x]][y] += px[x] * w[x][y];
    double h = 0.0;
    for (std::size_t y = 0; y < ny; ++y) {
        double py = joint[0][y] + joint[1][y];
        for (int b = 0; b < 2; ++b)
            if (joint[b][y] > 0.0) h -= joint[b][y] * std::log2(joint[b][y] / py);
    }
    return h;
}

double bmd_rate_unclipped(const std::vector<double>& px, const Table& w, const std::vector<std::vector<int>>& bits) {
    double r = entropy(px);
    for (const auto& level : bits) r -= conditional_bit_entropy(px, w, level);
    return r;
}

Brgc8Table brgc8_table() {
    return {{7, 5, 3, 1, 1, 3, 5, 7},
            {-1, -1, -1, -1, 1, 1, 1, 1},
            {-7, -5, -3, -1, 1, 3, 5, 7},
            {0, 0, 1, 1, 1, 1, 0, 0},
            {0, 1, 1, 0, 0, 1, 1, 0}};
}

namespace {

void compositions(int left, std::size_t pos, Counts& c, const std::function<void(const Counts&)>& f) {
    if (pos + 1 == c.size()) {
        c[pos] = static_cast<std::uint32_t>(left);
        f(c);
        return;
    }
    for (int k = 0; k <= left; ++k) {
        c[pos] = static_cast<std::uint32_t>(k);
        compositions(left - k, pos + 1, c, f);
    }
}

bool within(double neg_log2_prob, int n, double h, double eps) {
    return std::fabs(neg_log2_prob / n - h) <= eps + kSlack;
}

// -log2 of a product over counts; infinity when a used symbol has mass zero.
double neg_log2(const Counts& c, const std::vector<double>& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0) continue;
        if (p[i] <= 0.0) return INFINITY;
        s -= c[i] * std::log2(p[i]);
    }
    return s;
}

struct JointModel {
    std::vector<double> pu, pv, puv;  // puv flattened u * nv + v
    std::size_t nu, nv;
    double hu, hv, huv;
};

JointModel make_model(const std::vector<double>& pu, const Table& w) {
    JointModel m;
    m.nu = pu.size();
    m.nv = w.front().size();
    m.pu = pu;
    m.pv.assign(m.nv, 0.0);
    m.puv.assign(m.nu * m.nv, 0.0);
    for (std::size_t u = 0; u < m.nu; ++u)
        for (std::size_t v = 0; v < m.nv; ++v) {
            m.puv[u * m.nv + v] = pu[u] * w[u][v];
            m.pv[v] += pu[u] * w[u][v];
        }
    m.hu = entropy(m.pu);
    m.hv = entropy(m.pv);
    m.huv = entropy(m.puv);
    return m;
}

// Walks every choice of per-u-symbol conditional compositions of v. The
// callback receives the flattened joint counts and the number of sequences.
void for_each_conditional(const JointModel& m, const Counts& uc, std::size_t a, Counts& joint, double mult,
                          const std::function<void(const Counts&, double)>& f) {
    if (a == m.nu) {
        f(joint, mult);
        return;
    }
    for_each_composition(static_cast<int>(uc[a]), static_cast<int>(m.nv), [&](const Counts& k) {
        for (std::size_t v = 0; v < m.nv; ++v) joint[a * m.nv + v] = k[v];
        for_each_conditional(m, uc, a + 1, joint, mult * multinomial(k), f);
    });
}

bool joint_counts_typical(const JointModel& m, const Counts& joint, int n, double eps) {
    Counts uc(m.nu, 0), vc(m.nv, 0);
    for (std::size_t u = 0; u < m.nu; ++u)
        for (std::size_t v = 0; v < m.nv; ++v) {
            uc[u] += joint[u * m.nv + v];
            vc[v] += joint[u * m.nv + v];
        }
    return within(neg_log2(uc, m.pu), n, m.hu, eps) && within(neg_log2(vc, m.pv), n, m.hv, eps) &&
           within(neg_log2(joint, m.puv), n, m.huv, eps);
}

}  // namespace

void for_each_composition(int n, int k, const std::function<void(const Counts&)>& f) {
    Counts c(static_cast<std::size_t>(k), 0);
    compositions(n, 0, c, f);
}

double log2_multinomial(const Counts& c) {
    double n = 0.0, s = 0.0;
    for (auto k : c) {
        n += k;
        s -= std::lgamma(k + 1.0);
    }
    return (s + std::lgamma(n + 1.0)) / std::log(2.0);
}

double multinomial(const Counts& c) { return std::round(std::exp2(log2_multinomial(c))); }

bool typical_counts(const Counts& c, const std::vector<double>& p, int n, double eps) {
    return within(neg_log2(c, p), n, entropy(p), eps);
}

SetSummary typical_set_by_composition(const std::vector<double>& p, int n, double eps) {
    SetSummary s;
    for_each_composition(n, static_cast<int>(p.size()), [&](const Counts& c) {
        if (!typical_counts(c, p, n, eps)) return;
        double mult = multinomial(c);
        s.count += mult;
        s.mass += mult * std::exp2(-neg_log2(c, p));
    });
    return s;
}

bool jointly_typical_pair(const std::vector<std::uint32_t>& x, const std::vector<std::uint32_t>& y, const Table& joint,
                          double eps) {
    if (x.size() != y.size()) throw std::invalid_argument("length mismatch");
    std::size_t nx = joint.size(), ny = joint.front().size();
    std::vector<double> px(nx, 0.0), py(ny, 0.0), pxy;
    for (std::size_t a = 0; a < nx; ++a)
        for (std::size_t b = 0; b < ny; ++b) {
            px[a] += joint[a][b];
            py[b] += joint[a][b];
            pxy.push_back(joint[a][b]);
        }
    Counts cx(nx, 0), cy(ny, 0), cxy(nx * ny, 0);
    for (std::size_t t = 0; t < x.size(); ++t) {
        ++cx[x[t]];
        ++cy[y[t]];
        ++cxy[x[t] * ny + y[t]];
    }
    int n = static_cast<int>(x.size());
    return within(neg_log2(cx, px), n, entropy(px), eps) && within(neg_log2(cy, py), n, entropy(py), eps) &&
           within(neg_log2(cxy, pxy), n, entropy(pxy), eps);
}

double conditional_prob_by_composition(const Counts& u_counts, const std::vector<double>& pu, const Table& w, int n,
                                       double eps) {
    auto m = make_model(pu, w);
    Counts joint(m.nu * m.nv, 0);
    double prob = 0.0;
    for_each_conditional(m, u_counts, 0, joint, 1.0, [&](const Counts& j, double mult) {
        if (!joint_counts_typical(m, j, n, eps)) return;
        double lp = 0.0;
        for (std::size_t u = 0; u < m.nu; ++u)
            for (std::size_t v = 0; v < m.nv; ++v)
                if (j[u * m.nv + v]) {
                    if (w[u][v] <= 0.0) return;
                    lp += j[u * m.nv + v] * std::log2(w[u][v]);
                }
        prob += mult * std::exp2(lp);
    });
    return prob;
}

double conditional_prob_direct(const std::vector<std::uint32_t>& u, const std::vector<double>& pu, const Table& w,
                               double eps) {
    std::size_t nv = w.front().size();
    Table joint(pu.size(), std::vector<double>(nv));
    for (std::size_t a = 0; a < pu.size(); ++a)
        for (std::size_t b = 0; b < nv; ++b) joint[a][b] = pu[a] * w[a][b];
    std::vector<std::uint32_t> v(u.size(), 0);
    double prob = 0.0;
    while (true) {
        if (jointly_typical_pair(u, v, joint, eps)) {
            double p = 1.0;
            for (std::size_t t = 0; t < u.size(); ++t) p *= w[u[t]][v[t]];
            prob += p;
        }
        std::size_t t = 0;
        while (t < v.size() && ++v[t] == nv) v[t++] = 0;
        if (t == v.size()) break;
    }
    return prob;
}

BSummary b_typical_by_composition(const std::vector<double>& pu, const Table& w, int n, double eps) {
    BSummary s;
    for_each_composition(n, static_cast<int>(pu.size()), [&](const Counts& c) {
        if (!typical_counts(c, pu, n, eps)) return;
        double q = conditional_prob_by_composition(c, pu, w, n, eps);
        if (q < 1.0 - eps - kSlack) return;
        double mult = multinomial(c);
        s.count += mult;
        s.mass += mult * std::exp2(-neg_log2(c, pu));
        s.member_compositions[c] = q;
    });
    return s;
}

JointSummary joint_set_by_composition(const std::vector<double>& pu, const Table& w, int n, double eps) {
    auto m = make_model(pu, w);
    JointSummary s;
    for_each_composition(n, static_cast<int>(m.nu), [&](const Counts& uc) {
        if (!within(neg_log2(uc, m.pu), n, m.hu, eps)) return;
        Counts joint(m.nu * m.nv, 0);
        double c = 0.0, mass = 0.0;
        for_each_conditional(m, uc, 0, joint, 1.0, [&](const Counts& j, double mult) {
            if (!joint_counts_typical(m, j, n, eps)) return;
            c += mult;
            mass += mult * std::exp2(-neg_log2(j, m.puv));
        });
        double mu = multinomial(uc);
        s.count += mu * c;
        s.mass += mu * mass;
        s.max_conditional = std::max(s.max_conditional, c);
    });
    return s;
}

}  // namespace oracle
