#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace tgemb {

// d-dimensional embedding per node of one snapshot. Columns exist only for
// nodes present at that step; `nodes` holds their global indices in ascending
// order. Storage is node-major: a node's vector is contiguous.
struct EmbeddingMatrix {
    std::uint32_t dim = 0;
    std::uint32_t timestep = 0;
    std::vector<std::uint32_t> nodes;
    std::vector<double> values;  // nodes.size() * dim

    std::uint32_t cols() const { return static_cast<std::uint32_t>(nodes.size()); }
    double* col(std::uint32_t c) { return values.data() + static_cast<std::size_t>(c) * dim; }
    const double* col(std::uint32_t c) const {
        return values.data() + static_cast<std::size_t>(c) * dim;
    }
    // Column index of a global node, -1 when the node is absent at this step.
    std::int64_t col_of(std::uint32_t node) const;
    bool all_finite() const;
};

struct LoadedEmbedding {
    EmbeddingMatrix matrix;  // nodes = 0..n-1 until remapped
    std::vector<std::string> ids;
};

// Binary container: magic "TGEMBEM1", u32 d, u32 n, u32 timestep, the d x n
// values row-major by dimension, then per-column ids as u32 length + bytes.
void write_embedding(const std::string& path, const EmbeddingMatrix& m,
                     const std::vector<std::string>& node_ids);
LoadedEmbedding read_embedding(const std::string& path);

// Rebinds loaded columns to a shared node index and restores the ascending
// column order the rest of the pipeline expects.
void remap_columns(EmbeddingMatrix& m, const std::vector<std::string>& ids,
                   const std::unordered_map<std::string, std::uint32_t>& node_index);

// `node<TAB>v1<TAB>...<TAB>vd` per column.
void write_embedding_tsv(const std::string& path, const EmbeddingMatrix& m,
                         const std::vector<std::string>& node_ids);

}  // namespace tgemb
