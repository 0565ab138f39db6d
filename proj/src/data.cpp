#include "slimrank/data.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "slimrank/errors.hpp"

namespace slimrank {

Rng::Rng(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32)};
    engine_.seed(seq);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
}

double Rng::next_unit() {
    // top 53 bits -> [0, 1); identical on every platform
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

int Rng::next_below(int bound) {
    if (bound <= 0) throw std::invalid_argument("Rng::next_below: bound <= 0");
    const std::uint64_t b = static_cast<std::uint64_t>(bound);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % b;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return static_cast<int>(x % b);
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : line) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) tokens.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

bool parse_double(const std::string& s, double& out) {
    const char* b = s.data();
    const char* e = b + s.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && p == e;
}

}  // namespace

LoadedDataset load_triplets(const std::filesystem::path& path,
                            const LoadOptions& options) {
    std::ifstream in(path);
    if (!in)
        throw ParseError(path.string(), 0, "cannot open file");

    std::unordered_map<std::string, int> user_index, item_index;
    std::vector<std::string> user_ids, item_ids;
    std::vector<Entry> entries;
    // (user, item) -> first line number, for duplicate reporting
    std::unordered_map<std::uint64_t, long> first_line;

    auto intern = [](std::unordered_map<std::string, int>& index,
                     std::vector<std::string>& ids, const std::string& id) {
        auto [it, fresh] = index.emplace(id, static_cast<int>(ids.size()));
        if (fresh) ids.push_back(id);
        return it->second;
    };

    std::string line;
    long line_no = 0;
    bool saw_data = false;
    while (std::getline(in, line)) {
        ++line_no;
        auto tokens = tokenize(line);
        if (tokens.empty() || tokens.front().starts_with('#')) continue;
        if (tokens.size() < 2) {
            throw ParseError(path.string(), line_no,
                             "expected at least `user item`, got " +
                                 std::to_string(tokens.size()) + " field(s)");
        }
        double value = 1.0;
        if (tokens.size() >= 3 && !parse_double(tokens[2], value)) {
            if (!saw_data)   // non-numeric value on the first row: header
                continue;
            throw ParseError(path.string(), line_no,
                             "value column is not a number: " + tokens[2]);
        }
        if (options.binarize) value = 1.0;
        if (!(value > 0.0) || !std::isfinite(value))
            throw ParseError(path.string(), line_no,
                             "values must be finite and > 0");

        const int u = intern(user_index, user_ids, tokens[0]);
        const int i = intern(item_index, item_ids, tokens[1]);
        const std::uint64_t key =
            (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(i);
        auto [it, fresh] = first_line.emplace(key, line_no);
        if (!fresh)
            throw DuplicateEntry(path.string() + ":" + std::to_string(line_no) +
                                 ": duplicate (user " + tokens[0] + ", item " +
                                 tokens[1] + "), first seen at line " +
                                 std::to_string(it->second));
        entries.push_back(Entry{u, i, value});
        saw_data = true;
    }
    if (!saw_data)
        throw EmptyDataset(path.string() + ": no data rows");

    UserItemMatrix matrix(static_cast<int>(user_ids.size()),
                          static_cast<int>(item_ids.size()),
                          std::move(entries));
    return LoadedDataset{std::move(matrix), std::move(user_ids),
                         std::move(item_ids)};
}

void write_triplets(const std::filesystem::path& path, const UserItemMatrix& x,
                    const std::vector<std::string>* user_ids,
                    const std::vector<std::string>* item_ids) {
    std::ofstream out(path);
    if (!out)
        throw Error("write_triplets: cannot open " + path.string());
    char buf[64];
    for (const Entry& e : x.entries()) {
        if (user_ids)
            out << (*user_ids)[e.user];
        else
            out << e.user;
        out << '\t';
        if (item_ids)
            out << (*item_ids)[e.item];
        else
            out << e.item;
        std::snprintf(buf, sizeof buf, "%.17g", e.value);
        out << '\t' << buf << '\n';
    }
    if (!out)
        throw Error("write_triplets: write failed for " + path.string());
}

std::vector<FoldSplit> split_folds(const UserItemMatrix& x, int n_folds,
                                   std::uint64_t seed) {
    if (n_folds < 1)
        throw std::invalid_argument("split_folds: n_folds must be >= 1");

    std::vector<FoldSplit> folds;
    folds.reserve(n_folds);
    for (int f = 0; f < n_folds; ++f) {
        Rng rng(seed, static_cast<std::uint64_t>(f));
        std::vector<Entry> train;
        std::vector<Entry> test;
        train.reserve(x.n_entries());
        for (int u = 0; u < x.n_users(); ++u) {
            const auto items = x.user_items(u);
            const auto values = x.user_values(u);
            if (items.size() < 2) {
                for (std::size_t i = 0; i < items.size(); ++i)
                    train.push_back(Entry{u, items[i], values[i]});
                continue;
            }
            const int held = rng.next_below(static_cast<int>(items.size()));
            for (std::size_t i = 0; i < items.size(); ++i) {
                Entry e{u, items[i], values[i]};
                if (static_cast<int>(i) == held)
                    test.push_back(e);
                else
                    train.push_back(e);
            }
        }
        folds.push_back(FoldSplit{
            f, UserItemMatrix(x.n_users(), x.n_items(), std::move(train)),
            std::move(test), seed});
    }
    return folds;
}

void write_fold(const std::filesystem::path& dir, const FoldSplit& fold) {
    std::filesystem::create_directories(dir);
    write_triplets(dir / "train.tsv", fold.train);
    std::ofstream test_out(dir / "test.tsv");
    char buf[64];
    for (const Entry& e : fold.test) {
        std::snprintf(buf, sizeof buf, "%.17g", e.value);
        test_out << e.user << '\t' << e.item << '\t' << buf << '\n';
    }
    std::ofstream meta(dir / "meta.txt");
    meta << "fold_index=" << fold.fold_index << "\n"
         << "seed=" << fold.seed << "\n"
         << "train_entries=" << fold.train.n_entries() << "\n"
         << "test_entries=" << fold.test.size() << "\n"
         << "n_users=" << fold.train.n_users() << "\n"
         << "n_items=" << fold.train.n_items() << "\n";
}

PlantedInstance synth_planted(int n_users, int n_items, int n_blocks,
                              int block_rank, double sparsity,
                              std::uint64_t seed) {
    if (n_users < 1 || n_items < 1 || n_blocks < 1 || block_rank < 1)
        throw std::invalid_argument("synth_planted: parameters must be positive");
    if (n_items % n_blocks != 0)
        throw std::invalid_argument(
            "synth_planted: n_items must be divisible by n_blocks");
    const int block = n_items / n_blocks;
    if (block_rank > block)
        throw std::invalid_argument(
            "synth_planted: block_rank exceeds block size");
    if (sparsity < 0.0 || sparsity >= 1.0)
        throw std::invalid_argument("synth_planted: sparsity must be in [0,1)");

    Rng rng(seed);

    // W_true: per block, chained rank-one factors u_l v_l^T on consecutive
    // index segments. Segments are disjoint, so the diagonal is zero and
    // the u_l (and v_l) are mutually orthogonal: the block's singular
    // values are exactly ||u_l|| ||v_l||, one per factor.
    Mat w = Mat::Zero(n_items, n_items);
    const int segments = std::min(block_rank + 1, block);
    for (int b = 0; b < n_blocks; ++b) {
        const int base = b * block;
        auto seg_begin = [&](int s) { return base + (s * block) / segments; };
        auto seg_end = [&](int s) { return base + ((s + 1) * block) / segments; };
        for (int l = 0; l < block_rank; ++l) {
            const int su = l % segments;
            const int sv = (l + 1) % segments;
            Vec u = Vec::Zero(n_items), v = Vec::Zero(n_items);
            int u_nnz = 0, v_nnz = 0;
            for (int i = seg_begin(su); i < seg_end(su); ++i) {
                if (rng.next_unit() < sparsity) continue;
                u(i) = 0.5 + rng.next_unit();
                ++u_nnz;
            }
            for (int i = seg_begin(sv); i < seg_end(sv); ++i) {
                if (rng.next_unit() < sparsity) continue;
                v(i) = 0.5 + rng.next_unit();
                ++v_nnz;
            }
            // keep every factor alive regardless of the sparsity draw
            if (u_nnz == 0) u(seg_begin(su)) = 0.5 + rng.next_unit();
            if (v_nnz == 0) v(seg_begin(sv)) = 0.5 + rng.next_unit();
            w += u * v.transpose();
        }
    }
    w.diagonal().setZero();   // exact zeros also when segments wrap (r = b)

    // X0: random sparse nonnegative, ~30% density
    Mat x0 = Mat::Zero(n_users, n_items);
    for (int i = 0; i < n_users; ++i)
        for (int j = 0; j < n_items; ++j)
            if (rng.next_unit() < 0.3) x0(i, j) = 0.5 + rng.next_unit();

    // X = clip(X0 * W_true): entrywise cap at a ratings-like ceiling
    Mat xd = x0 * w;
    std::vector<Entry> entries;
    for (int i = 0; i < n_users; ++i)
        for (int j = 0; j < n_items; ++j) {
            const double v = std::min(xd(i, j), 5.0);
            if (v > 0.0) entries.push_back(Entry{i, j, v});
        }

    return PlantedInstance{
        UserItemMatrix(n_users, n_items, std::move(entries)),
        CoefficientMatrix(std::move(w))};
}

}  // namespace slimrank
