#include "winmdp/linalg.hpp"

#include <algorithm>

namespace winmdp {

namespace {

// SCC ids for a plain adjacency list, iterative Tarjan. Edges of the
// condensation go from higher ids to lower ids.
std::vector<int> scc_adj(const std::vector<std::vector<int>>& adj, int* count) {
    int n = static_cast<int>(adj.size());
    std::vector<int> index(n, -1), low(n), comp(n, -1), stack;
    std::vector<bool> on_stack(n, false);
    int next_index = 0, next_comp = 0;
    struct Frame {
        int v;
        size_t ei;
    };
    std::vector<Frame> frames;
    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        frames.push_back({root, 0});
        while (!frames.empty()) {
            Frame& f = frames.back();
            int v = f.v;
            bool descended = false;
            while (f.ei < adj[v].size()) {
                int w = adj[v][f.ei++];
                if (index[w] == -1) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[v] = std::min(low[v], index[w]);
            }
            if (descended) continue;
            if (low[v] == index[v]) {
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = next_comp;
                } while (w != v);
                ++next_comp;
            }
            frames.pop_back();
            if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        }
    }
    if (count) *count = next_comp;
    return comp;
}

}  // namespace

std::vector<Rational> solve_linear_system(std::vector<std::vector<Rational>> a,
                                          std::vector<Rational> b) {
    int n = static_cast<int>(a.size());
    if (n == 0) return {};

    // Integer lift: scale each augmented row by the lcm of its denominators.
    std::vector<std::vector<mpz_class>> m(n, std::vector<mpz_class>(n + 1));
    for (int i = 0; i < n; ++i) {
        mpz_class lcm = 1;
        auto fold = [&lcm](const Rational& q) {
            mpz_class l;
            mpz_lcm(l.get_mpz_t(), lcm.get_mpz_t(), q.get_den().get_mpz_t());
            lcm = l;
        };
        for (const Rational& q : a[i]) fold(q);
        fold(b[i]);
        for (int j = 0; j < n; ++j) {
            Rational scaled = a[i][j] * lcm;
            m[i][j] = scaled.get_num();
        }
        Rational scaled = b[i] * lcm;
        m[i][n] = scaled.get_num();
    }

    // Fraction-free elimination; prev is the previous pivot, divisions exact.
    mpz_class prev = 1;
    for (int k = 0; k < n; ++k) {
        int pivot = -1;
        for (int r = k; r < n; ++r)
            if (m[r][k] != 0) {
                pivot = r;
                break;
            }
        if (pivot == -1) throw SingularMatrix();
        if (pivot != k) std::swap(m[pivot], m[k]);
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j <= n; ++j) {
                mpz_class t = m[k][k] * m[i][j] - m[i][k] * m[k][j];
                mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }

    std::vector<Rational> x(n);
    for (int i = n - 1; i >= 0; --i) {
        Rational acc(m[i][n]);
        for (int j = i + 1; j < n; ++j) acc -= Rational(m[i][j]) * x[j];
        x[i] = acc / Rational(m[i][i]);
        x[i].canonicalize();
    }
    return x;
}

std::vector<Rational> solve_markov_system(const std::vector<SparseRow>& p,
                                          const std::vector<Rational>& c) {
    int n = static_cast<int>(p.size());
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < n; ++i)
        for (const auto& [j, coef] : p[i])
            if (coef != 0) adj[i].push_back(j);

    int comp_count = 0;
    std::vector<int> comp = scc_adj(adj, &comp_count);
    std::vector<std::vector<int>> members(comp_count);
    for (int i = 0; i < n; ++i) members[comp[i]].push_back(i);

    std::vector<Rational> x(n, Rational(0));
    std::vector<int> local(n, -1);
    // Dependencies x_i -> x_j point to lower component ids; solve ascending.
    for (int cid = 0; cid < comp_count; ++cid) {
        const auto& vs = members[cid];
        int k = static_cast<int>(vs.size());
        for (int li = 0; li < k; ++li) local[vs[li]] = li;

        if (k == 1) {
            int i = vs[0];
            Rational rhs = c[i];
            Rational self(0);
            for (const auto& [j, coef] : p[i]) {
                if (j == i)
                    self += coef;
                else
                    rhs += coef * x[j];
            }
            if (self == 1) throw SingularMatrix();
            x[i] = rhs / (1 - self);
            x[i].canonicalize();
            local[i] = -1;
            continue;
        }

        std::vector<std::vector<Rational>> a(k, std::vector<Rational>(k, Rational(0)));
        std::vector<Rational> b(k);
        for (int li = 0; li < k; ++li) {
            int i = vs[li];
            a[li][li] = 1;
            Rational rhs = c[i];
            for (const auto& [j, coef] : p[i]) {
                if (local[j] != -1)
                    a[li][local[j]] -= coef;
                else
                    rhs += coef * x[j];
            }
            b[li] = rhs;
        }
        std::vector<Rational> sol = solve_linear_system(std::move(a), std::move(b));
        for (int li = 0; li < k; ++li) {
            x[vs[li]] = sol[li];
            local[vs[li]] = -1;
        }
    }
    return x;
}

}  // namespace winmdp
