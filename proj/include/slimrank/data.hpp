#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "slimrank/matrix.hpp"
#include "slimrank/types.hpp"

namespace slimrank {

struct LoadOptions {
    bool binarize = false;   // force all values to 1.0
};

/// A loaded dataset plus the external-id -> dense-index mappings.
struct LoadedDataset {
    UserItemMatrix matrix;
    std::vector<std::string> user_ids;   // index -> external id
    std::vector<std::string> item_ids;
};

/// Reads whitespace- or comma-separated `user item [value ...]` triplets.
/// The value column defaults to 1.0 (implicit feedback); columns past the
/// third (e.g. timestamps) are ignored. An optional non-numeric header line
/// is skipped. External ids are mapped to dense 0-based indices in order of
/// first appearance. Throws ParseError, DuplicateEntry or EmptyDataset.
LoadedDataset load_triplets(const std::filesystem::path& path,
                            const LoadOptions& options = {});

/// Writes `user<TAB>item<TAB>value` rows with values at 17 significant
/// digits (bit-exact round trip). External ids are used when given,
/// otherwise the dense indices.
void write_triplets(const std::filesystem::path& path, const UserItemMatrix& x,
                    const std::vector<std::string>* user_ids = nullptr,
                    const std::vector<std::string>* item_ids = nullptr);

/// One leave-one-out split: per user with >= 2 entries, exactly one entry is
/// held out; single-entry users stay entirely in train.
struct FoldSplit {
    int fold_index = 0;
    UserItemMatrix train;
    std::vector<Entry> test;
    std::uint64_t seed = 0;
};

/// n_folds independent leave-one-out redraws (fold f seeded from
/// {seed, f}); deterministic given seed.
std::vector<FoldSplit> split_folds(const UserItemMatrix& x, int n_folds = 5,
                                   std::uint64_t seed = 0);

/// Writes train.tsv, test.tsv and meta.txt (seed, counts) into `dir`.
void write_fold(const std::filesystem::path& dir, const FoldSplit& fold);

struct PlantedInstance {
    UserItemMatrix x;
    CoefficientMatrix w_true;
};

/// Synthetic fixture: W_true is block-diagonal, nonnegative, zero-diagonal
/// and exactly rank `block_rank` per block (chained rank-one factors on
/// disjoint index segments); X = min(X0 * W_true, 5.0) for a random sparse
/// nonnegative X0. `sparsity` in [0,1) knocks out factor entries.
PlantedInstance synth_planted(int n_users, int n_items, int n_blocks,
                              int block_rank, double sparsity,
                              std::uint64_t seed);

/// Seeded RNG shared by splits and iterate initialization. Wraps
/// std::mt19937_64 with hand-rolled output mappings (top 53 bits for
/// reals, rejection for bounded ints) so draws are identical across
/// platforms, not just reproducible on one.
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    Rng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64() { return engine_(); }
    double next_unit();                  // [0, 1)
    int next_below(int bound);           // [0, bound)

private:
    std::mt19937_64 engine_;
};

}  // namespace slimrank
