#include "snf/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "snf/prng.hpp"

namespace snf {

CsrGraph build_csr(uint32_t num_vertices,
                   std::vector<std::pair<uint32_t, uint32_t>> edges) {
    for (const auto& [s, d] : edges) {
        if (s >= num_vertices || d >= num_vertices)
            throw std::runtime_error("edge id out of range");
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    CsrGraph g;
    g.num_vertices = num_vertices;
    g.num_edges = edges.size();
    g.row_ptr.assign(num_vertices + 1, 0);
    g.col_idx.reserve(edges.size());
    g.edge_weight.assign(edges.size(), kFxOne);
    for (const auto& [s, d] : edges) {
        g.row_ptr[s + 1]++;
        g.col_idx.push_back(d);
    }
    for (uint32_t v = 0; v < num_vertices; v++) g.row_ptr[v + 1] += g.row_ptr[v];
    return g;
}

CsrGraph load_edge_list(std::string_view text,
                        std::optional<uint32_t> num_vertices) {
    std::vector<std::pair<uint32_t, uint32_t>> edges;
    uint32_t max_id = 0;
    size_t line_no = 0;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        line_no++;
        // trim
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
            line.remove_suffix(1);
        while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
        if (line.empty() || line.front() == '#') continue;

        std::istringstream ss{std::string(line)};
        long long src = -1, dst = -1;
        std::string rest;
        if (!(ss >> src >> dst) || src < 0 || dst < 0 || (ss >> rest))
            throw std::runtime_error("malformed edge line " +
                                     std::to_string(line_no) + ": '" +
                                     std::string(line) + "'");
        if (num_vertices &&
            (src >= *num_vertices || dst >= *num_vertices))
            throw std::runtime_error("vertex id out of range on line " +
                                     std::to_string(line_no));
        edges.emplace_back(static_cast<uint32_t>(src),
                           static_cast<uint32_t>(dst));
        max_id = std::max(max_id, static_cast<uint32_t>(std::max(src, dst)));
    }
    uint32_t v = num_vertices ? *num_vertices : (edges.empty() ? 0 : max_id + 1);
    return build_csr(v, std::move(edges));
}

std::string to_edge_list(const CsrGraph& g) {
    std::ostringstream out;
    for (uint32_t v = 0; v < g.num_vertices; v++)
        for (uint64_t e = g.row_begin(v); e < g.row_end(v); e++)
            out << v << ' ' << g.col_idx[e] << '\n';
    return out.str();
}

CsrGraph gen_synthetic(GraphModel model, uint32_t num_vertices,
                       uint64_t num_edges, uint64_t seed) {
    const uint64_t v64 = num_vertices;
    if (num_edges > v64 * v64)
        throw std::runtime_error("infeasible edge count");
    if (num_edges > 0 && num_vertices == 0)
        throw std::runtime_error("edges on an empty vertex set");

    SplitMix64 rng(seed);
    std::set<std::pair<uint32_t, uint32_t>> edges;
    uint64_t budget = 10 * num_edges;

    uint32_t levels = 0;
    while ((1u << levels) < num_vertices) levels++;

    while (edges.size() < num_edges && budget-- > 0) {
        uint32_t src, dst;
        if (model == GraphModel::uniform) {
            src = static_cast<uint32_t>(rng.next_below(num_vertices));
            dst = static_cast<uint32_t>(rng.next_below(num_vertices));
        } else {
            // R-MAT with (a,b,c,d) = (0.57, 0.19, 0.19, 0.05)
            src = 0;
            dst = 0;
            for (uint32_t l = 0; l < levels; l++) {
                double u = rng.next_double();
                uint32_t bit = 1u << (levels - 1 - l);
                if (u < 0.57) {
                    // top-left
                } else if (u < 0.76) {
                    dst |= bit;
                } else if (u < 0.95) {
                    src |= bit;
                } else {
                    src |= bit;
                    dst |= bit;
                }
            }
            if (src >= num_vertices || dst >= num_vertices) continue;
        }
        edges.emplace(src, dst);
    }
    return build_csr(num_vertices,
                     {edges.begin(), edges.end()});
}

CsrGraph gen_regular_ring(uint32_t num_vertices, uint32_t degree) {
    if (degree >= num_vertices)
        throw std::runtime_error("degree must be < |V|");
    std::vector<std::pair<uint32_t, uint32_t>> edges;
    edges.reserve(static_cast<size_t>(num_vertices) * degree);
    for (uint32_t v = 0; v < num_vertices; v++)
        for (uint32_t k = 1; k <= degree; k++)
            edges.emplace_back(v, (v + k) % num_vertices);
    return build_csr(num_vertices, std::move(edges));
}

FeatureMatrix gen_features(uint32_t num_vertices, uint32_t num_features,
                           uint64_t seed) {
    FeatureMatrix m;
    m.rows = num_vertices;
    m.cols = num_features;
    m.data.resize(static_cast<size_t>(num_vertices) * num_features);
    SplitMix64 rng(seed);
    // uniform Q16.16 in [-8.0, 8.0]
    const uint64_t span = (16ull << kFxShift) + 1;
    for (auto& v : m.data)
        v = static_cast<fx_t>(-(8 << kFxShift) +
                              static_cast<int64_t>(rng.next_below(span)));
    return m;
}

CsrGraph normalize_laplacian(const CsrGraph& g) {
    CsrGraph out;
    out.num_vertices = g.num_vertices;
    out.row_ptr.assign(g.num_vertices + 1, 0);

    for (uint32_t v = 0; v < g.num_vertices; v++) {
        bool has_self = false;
        for (uint64_t e = g.row_begin(v); e < g.row_end(v); e++)
            if (g.col_idx[e] == v) has_self = true;
        uint64_t entries = g.degree(v) + (has_self ? 0 : 1);
        out.row_ptr[v + 1] = out.row_ptr[v] + entries;
    }
    out.num_edges = out.row_ptr[g.num_vertices];
    out.col_idx.resize(out.num_edges);
    out.edge_weight.resize(out.num_edges);

    for (uint32_t v = 0; v < g.num_vertices; v++) {
        uint64_t w = out.row_ptr[v];
        bool diag_emitted = false;
        double dv = g.degree(v);
        for (uint64_t e = g.row_begin(v); e < g.row_end(v); e++) {
            uint32_t j = g.col_idx[e];
            if (!diag_emitted && j > v) {
                out.col_idx[w] = v;
                out.edge_weight[w++] = kFxOne;
                diag_emitted = true;
            }
            double dj = g.degree(j);
            double val = (dv > 0 && dj > 0) ? -1.0 / std::sqrt(dv * dj) : 0.0;
            if (j == v) {
                out.col_idx[w] = v;
                out.edge_weight[w++] = fx_from_double(1.0 + val);
                diag_emitted = true;
            } else {
                out.col_idx[w] = j;
                out.edge_weight[w++] = fx_from_double(val);
            }
        }
        if (!diag_emitted) {
            out.col_idx[w] = v;
            out.edge_weight[w++] = kFxOne;
        }
    }
    return out;
}

TiledCsrIndex tile_offsets(const CsrGraph& g,
                           const std::vector<uint32_t>& strip_bounds) {
    if (strip_bounds.size() < 2 || strip_bounds.front() != 0 ||
        strip_bounds.back() != g.num_vertices)
        throw std::runtime_error("strip bounds must partition [0, |V|)");
    for (size_t i = 1; i < strip_bounds.size(); i++)
        if (strip_bounds[i] < strip_bounds[i - 1])
            throw std::runtime_error("strip bounds must be non-decreasing");

    TiledCsrIndex idx;
    idx.strip_bounds = strip_bounds;
    const size_t sp1 = strip_bounds.size();
    idx.offsets.resize(static_cast<size_t>(g.num_vertices) * sp1);
    for (uint32_t v = 0; v < g.num_vertices; v++) {
        auto row_begin = g.col_idx.begin() + g.row_begin(v);
        auto row_end = g.col_idx.begin() + g.row_end(v);
        for (size_t s = 0; s < sp1; s++) {
            auto it = std::lower_bound(row_begin, row_end, strip_bounds[s]);
            idx.offsets[static_cast<size_t>(v) * sp1 + s] =
                g.row_begin(v) + (it - row_begin);
        }
    }
    return idx;
}

CsrGraph csr_transpose(const CsrGraph& g) {
    CsrGraph t;
    t.num_vertices = g.num_vertices;
    t.num_edges = g.num_edges;
    t.row_ptr.assign(g.num_vertices + 1, 0);
    t.col_idx.resize(g.num_edges);
    t.edge_weight.resize(g.num_edges);
    for (uint64_t e = 0; e < g.num_edges; e++) t.row_ptr[g.col_idx[e] + 1]++;
    for (uint32_t v = 0; v < g.num_vertices; v++) t.row_ptr[v + 1] += t.row_ptr[v];
    std::vector<uint64_t> cursor(t.row_ptr.begin(), t.row_ptr.end() - 1);
    for (uint32_t v = 0; v < g.num_vertices; v++) {
        for (uint64_t e = g.row_begin(v); e < g.row_end(v); e++) {
            uint64_t slot = cursor[g.col_idx[e]]++;
            t.col_idx[slot] = v;
            t.edge_weight[slot] = g.edge_weight[e];
        }
    }
    return t;
}

namespace {

template <typename T>
void write_pod(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void write_vec(std::ostream& out, const std::vector<T>& v) {
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(T)));
}

template <typename T>
T read_pod(std::istream& in) {
    T v;
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("truncated file");
    return v;
}

template <typename T>
void read_vec(std::istream& in, std::vector<T>& v, size_t n) {
    v.resize(n);
    in.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(n * sizeof(T)));
    if (!in) throw std::runtime_error("truncated file");
}

void check_magic(std::istream& in, const char* magic) {
    char buf[4];
    in.read(buf, 4);
    if (!in || std::memcmp(buf, magic, 4) != 0)
        throw std::runtime_error(std::string("bad magic, expected ") + magic);
}

}  // namespace

void save_graph(const CsrGraph& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out.write("SNFG", 4);
    write_pod<uint64_t>(out, g.num_vertices);
    write_pod<uint64_t>(out, g.num_edges);
    write_vec(out, g.row_ptr);
    write_vec(out, g.col_idx);
    write_vec(out, g.edge_weight);
}

CsrGraph load_graph(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    check_magic(in, "SNFG");
    CsrGraph g;
    g.num_vertices = static_cast<uint32_t>(read_pod<uint64_t>(in));
    g.num_edges = read_pod<uint64_t>(in);
    read_vec(in, g.row_ptr, g.num_vertices + 1);
    read_vec(in, g.col_idx, g.num_edges);
    read_vec(in, g.edge_weight, g.num_edges);
    return g;
}

void save_features(const FeatureMatrix& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out.write("SNFX", 4);
    write_pod<uint64_t>(out, m.rows);
    write_pod<uint64_t>(out, m.cols);
    write_vec(out, m.data);
}

FeatureMatrix load_features(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    check_magic(in, "SNFX");
    FeatureMatrix m;
    m.rows = static_cast<uint32_t>(read_pod<uint64_t>(in));
    m.cols = static_cast<uint32_t>(read_pod<uint64_t>(in));
    read_vec(in, m.data, static_cast<size_t>(m.rows) * m.cols);
    return m;
}

}  // namespace snf
