#include "tgemb/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace tgemb {

namespace {

constexpr char kMagic[8] = {'T', 'G', 'E', 'M', 'B', 'E', 'M', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t get_u32(std::istream& in, const std::string& path) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw std::runtime_error("truncated embedding file: " + path);
    return v;
}

}  // namespace

std::int64_t EmbeddingMatrix::col_of(std::uint32_t node) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), node);
    if (it == nodes.end() || *it != node) return -1;
    return it - nodes.begin();
}

bool EmbeddingMatrix::all_finite() const {
    for (double v : values)
        if (!std::isfinite(v)) return false;
    return true;
}

void write_embedding(const std::string& path, const EmbeddingMatrix& m,
                     const std::vector<std::string>& node_ids) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write embedding: " + path);
    out.write(kMagic, sizeof kMagic);
    const std::uint32_t n = m.cols();
    put_u32(out, m.dim);
    put_u32(out, n);
    put_u32(out, m.timestep);
    // file layout is dimension-major (one row per embedding dimension)
    std::vector<double> row(n);
    for (std::uint32_t r = 0; r < m.dim; ++r) {
        for (std::uint32_t c = 0; c < n; ++c) row[c] = m.col(c)[r];
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(sizeof(double) * n));
    }
    for (std::uint32_t c = 0; c < n; ++c) {
        const std::string& id = node_ids.at(m.nodes[c]);
        put_u32(out, static_cast<std::uint32_t>(id.size()));
        out.write(id.data(), static_cast<std::streamsize>(id.size()));
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

LoadedEmbedding read_embedding(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open embedding: " + path);
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw std::runtime_error("not an embedding file: " + path);
    LoadedEmbedding le;
    le.matrix.dim = get_u32(in, path);
    std::uint32_t n = get_u32(in, path);
    le.matrix.timestep = get_u32(in, path);
    le.matrix.values.resize(static_cast<std::size_t>(le.matrix.dim) * n);
    std::vector<double> row(n);
    for (std::uint32_t r = 0; r < le.matrix.dim; ++r) {
        in.read(reinterpret_cast<char*>(row.data()),
                static_cast<std::streamsize>(sizeof(double) * n));
        if (!in) throw std::runtime_error("truncated embedding file: " + path);
        for (std::uint32_t c = 0; c < n; ++c) le.matrix.values[static_cast<std::size_t>(c) * le.matrix.dim + r] = row[c];
    }
    le.matrix.nodes.resize(n);
    std::iota(le.matrix.nodes.begin(), le.matrix.nodes.end(), 0u);
    le.ids.resize(n);
    for (std::uint32_t c = 0; c < n; ++c) {
        std::uint32_t len = get_u32(in, path);
        le.ids[c].resize(len);
        in.read(le.ids[c].data(), len);
        if (!in) throw std::runtime_error("truncated embedding file: " + path);
    }
    return le;
}

void remap_columns(EmbeddingMatrix& m, const std::vector<std::string>& ids,
                   const std::unordered_map<std::string, std::uint32_t>& node_index) {
    const std::uint32_t n = m.cols();
    if (ids.size() != n) throw std::invalid_argument("remap_columns: id count mismatch");
    std::vector<std::uint32_t> mapped(n);
    for (std::uint32_t c = 0; c < n; ++c) {
        auto it = node_index.find(ids[c]);
        if (it == node_index.end())
            throw std::runtime_error("embedding column references unknown node '" + ids[c] + "'");
        mapped[c] = it->second;
    }
    std::vector<std::uint32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0u);
    std::sort(perm.begin(), perm.end(),
              [&](std::uint32_t a, std::uint32_t b) { return mapped[a] < mapped[b]; });
    for (std::uint32_t c = 1; c < n; ++c)
        if (mapped[perm[c]] == mapped[perm[c - 1]])
            throw std::runtime_error("embedding has duplicate column for node '" +
                                     ids[perm[c]] + "'");
    std::vector<double> values(m.values.size());
    std::vector<std::uint32_t> nodes(n);
    for (std::uint32_t c = 0; c < n; ++c) {
        nodes[c] = mapped[perm[c]];
        std::copy_n(m.col(perm[c]), m.dim, values.data() + static_cast<std::size_t>(c) * m.dim);
    }
    m.nodes = std::move(nodes);
    m.values = std::move(values);
}

void write_embedding_tsv(const std::string& path, const EmbeddingMatrix& m,
                         const std::vector<std::string>& node_ids) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write embedding tsv: " + path);
    char buf[64];
    for (std::uint32_t c = 0; c < m.cols(); ++c) {
        out << node_ids.at(m.nodes[c]);
        const double* v = m.col(c);
        for (std::uint32_t r = 0; r < m.dim; ++r) {
            std::snprintf(buf, sizeof buf, "%.17g", v[r]);
            out << '\t' << buf;
        }
        out << '\n';
    }
}

}  // namespace tgemb
