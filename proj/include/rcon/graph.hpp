#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rcon/common.hpp"
#include "rcon/rng.hpp"

namespace rcon {

// Undirected simple graph stored as a sorted edge list plus per-node
// neighbor lists; dense matrices are materialized only for spectral work.
// Immutable after construction.
class Graph {
public:
    using Edge = std::pair<int, int>;  // first < second

    static Graph from_edges(int n, std::vector<Edge> edges) {
        if (n < 1) throw param_error("graph needs at least one node");
        std::set<Edge> seen;
        for (auto& e : edges) {
            if (e.first == e.second) throw param_error("self-loop rejected");
            if (e.first > e.second) std::swap(e.first, e.second);
            if (e.first < 0 || e.second >= n) throw param_error("edge endpoint out of range");
            if (!seen.insert(e).second) throw param_error("duplicate edge rejected");
        }
        std::sort(edges.begin(), edges.end());
        return Graph(n, std::move(edges));
    }

    // --- Named deterministic families ----------------------------------

    static Graph complete(int n) {
        require_size(n);
        std::vector<Edge> e;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) e.push_back({i, j});
        return from_edges(n, std::move(e));
    }

    static Graph ring(int n) {
        if (n < 3) throw param_error("ring needs n >= 3");
        std::vector<Edge> e;
        for (int i = 0; i < n; ++i) e.push_back({std::min(i, (i + 1) % n), std::max(i, (i + 1) % n)});
        return from_edges(n, std::move(e));
    }

    static Graph line(int n) {
        require_size(n);
        std::vector<Edge> e;
        for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
        return from_edges(n, std::move(e));
    }

    static Graph star(int n) {
        require_size(n);
        std::vector<Edge> e;
        for (int i = 1; i < n; ++i) e.push_back({0, i});
        return from_edges(n, std::move(e));
    }

    // Balanced binary tree: node i has children 2i+1, 2i+2.
    static Graph tree(int n) {
        require_size(n);
        std::vector<Edge> e;
        for (int i = 1; i < n; ++i) e.push_back({(i - 1) / 2, i});
        return from_edges(n, std::move(e));
    }

    // 3-regular circulant: ring plus the antipodal perfect matching.
    static Graph cubic(int n) {
        if (n < 4 || n % 2 != 0) throw param_error("cubic graph needs even n >= 4");
        std::vector<Edge> e;
        for (int i = 0; i < n; ++i) e.push_back({std::min(i, (i + 1) % n), std::max(i, (i + 1) % n)});
        for (int i = 0; i < n / 2; ++i) e.push_back({i, i + n / 2});
        std::sort(e.begin(), e.end());
        e.erase(std::unique(e.begin(), e.end()), e.end());  // n == 4 collapses to K4
        return from_edges(n, std::move(e));
    }

    // Circulant lattice: each node connected to its k/2 nearest neighbors on
    // each side (k even).
    static Graph k_regular_lattice(int n, int k) {
        require_size(n);
        if (k < 2 || k % 2 != 0 || k >= n)
            throw param_error("k-regular lattice needs even k with 2 <= k < n");
        std::set<Edge> e;
        for (int i = 0; i < n; ++i)
            for (int m = 1; m <= k / 2; ++m) {
                const int j = (i + m) % n;
                e.insert({std::min(i, j), std::max(i, j)});
            }
        return from_edges(n, std::vector<Edge>(e.begin(), e.end()));
    }

    static Graph bipartite_complete(int p, int q) {
        if (p < 1 || q < 1 || p + q < 2) throw param_error("bipartite parts must be nonempty");
        std::vector<Edge> e;
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < q; ++j) e.push_back({i, p + j});
        return from_edges(p + q, std::move(e));
    }

    // --- Random connected instances -------------------------------------

    static Graph erdos_renyi(int n, double p, std::uint64_t seed) {
        require_size(n);
        if (!(p > 0.0) || p > 1.0) throw param_error("erdos_renyi needs 0 < p <= 1");
        for (std::uint64_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
            RngStream rng = RngStream::keyed(seed, StreamTag::graph, attempt);
            std::vector<Edge> e;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (rng.uniform01() < p) e.push_back({i, j});
            Graph g(n, std::move(e));
            if (g.is_connected()) return g;
        }
        throw generation_error("erdos_renyi: no connected instance within " +
                               std::to_string(kMaxAttempts) + " attempts");
    }

    // Random geometric graph on the unit square.
    static Graph geometric(int n, double radius, std::uint64_t seed) {
        require_size(n);
        if (!(radius > 0.0)) throw param_error("geometric needs radius > 0");
        for (std::uint64_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
            RngStream rng = RngStream::keyed(seed, StreamTag::graph, attempt);
            std::vector<std::pair<double, double>> pts(n);
            for (auto& pt : pts) {
                pt.first = rng.uniform01();
                pt.second = rng.uniform01();
            }
            std::vector<Edge> e;
            const double r2 = radius * radius;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    const double dx = pts[i].first - pts[j].first;
                    const double dy = pts[i].second - pts[j].second;
                    if (dx * dx + dy * dy <= r2) e.push_back({i, j});
                }
            Graph g(n, std::move(e));
            if (g.is_connected()) return g;
        }
        throw generation_error("geometric: no connected instance within " +
                               std::to_string(kMaxAttempts) + " attempts");
    }

    // --- Accessors -------------------------------------------------------

    int node_count() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<int>& neighbors(int i) const { return nbrs_[i]; }
    int degree(int i) const { return degree_[i]; }
    int d_max() const { return d_max_; }
    int degree_sum() const { return 2 * edge_count(); }

    // Graph-traversal connectivity check, independent of any spectral data.
    bool is_connected() const {
        if (n_ == 0) return false;
        std::vector<char> seen(n_, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int count = 1;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (int w : nbrs_[v])
                if (!seen[w]) {
                    seen[w] = 1;
                    ++count;
                    stack.push_back(w);
                }
        }
        return count == n_;
    }

    Eigen::MatrixXd adjacency() const {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
        for (const auto& [i, j] : edges_) {
            a(i, j) = 1.0;
            a(j, i) = 1.0;
        }
        return a;
    }

    Eigen::MatrixXd laplacian() const {
        Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n_, n_);
        for (const auto& [i, j] : edges_) {
            l(i, i) += 1.0;
            l(j, j) += 1.0;
            l(i, j) -= 1.0;
            l(j, i) -= 1.0;
        }
        return l;
    }

    // --- Plain-text edge-list serialization ------------------------------
    // First line N, then one "i j" line per edge (0-based).

    void save(std::ostream& os) const {
        os << n_ << "\n";
        for (const auto& [i, j] : edges_) os << i << " " << j << "\n";
    }

    void save_file(const std::string& path) const {
        std::ofstream os(path);
        if (!os) throw param_error("cannot open " + path + " for writing");
        save(os);
    }

    static Graph load(std::istream& is) {
        int n = 0;
        if (!(is >> n)) throw param_error("edge list: missing node count");
        std::vector<Edge> e;
        int i, j;
        while (is >> i >> j) e.push_back({i, j});
        return from_edges(n, std::move(e));
    }

    static Graph load_file(const std::string& path) {
        std::ifstream is(path);
        if (!is) throw param_error("cannot open " + path);
        return load(is);
    }

private:
    Graph(int n, std::vector<Edge> edges)
        : n_(n), edges_(std::move(edges)), nbrs_(n), degree_(n, 0), d_max_(0) {
        for (const auto& [i, j] : edges_) {
            nbrs_[i].push_back(j);
            nbrs_[j].push_back(i);
            ++degree_[i];
            ++degree_[j];
        }
        for (auto& v : nbrs_) std::sort(v.begin(), v.end());
        for (int d : degree_) d_max_ = std::max(d_max_, d);
    }

    static void require_size(int n) {
        if (n < 2) throw param_error("graph family needs n >= 2");
    }

    static constexpr std::uint64_t kMaxAttempts = 1000;

    int n_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> nbrs_;
    std::vector<int> degree_;
    int d_max_;
};

// Laplacian eigendecomposition of a connected graph. The first eigenvector is
// pinned to the all-positive constant vector.
struct Spectrum {
    Eigen::VectorXd eigenvalues;  // ascending, eigenvalues(0) ~ 0
    Eigen::MatrixXd u;            // orthonormal; first column = 1/sqrt(N)
    Eigen::MatrixXd phi;          // columns 2..N of u
    Eigen::VectorXd b_diag;       // -lambda_2, ..., -lambda_N

    double lambda2() const { return eigenvalues(1); }
    double lambda_max() const { return eigenvalues(eigenvalues.size() - 1); }
};

// Eigenvalues of the Laplacian for any graph (no connectivity precondition);
// the number of near-zero entries counts connected components.
inline Eigen::VectorXd laplacian_eigenvalues(const Graph& g) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g.laplacian(),
                                                          Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw numeric_error("Laplacian eigensolve failed");
    return solver.eigenvalues();
}

inline Spectrum spectrum(const Graph& g) {
    if (!g.is_connected()) throw precondition_error("spectrum requires a connected graph");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g.laplacian());
    if (solver.info() != Eigen::Success) throw numeric_error("Laplacian eigensolve failed");
    Spectrum s;
    s.eigenvalues = solver.eigenvalues();
    s.u = solver.eigenvectors();
    if (s.u.col(0).sum() < 0.0) s.u.col(0) = -s.u.col(0);  // sign convention
    const int n = g.node_count();
    s.phi = s.u.rightCols(n - 1);
    s.b_diag = -s.eigenvalues.tail(n - 1);
    return s;
}

}  // namespace rcon
