#pragma once

// Worklist certification that a parameter gives an embedded curve.
//
// Pairs (u, v) with u in f.S_n and v in g.S_n are refined until the images
// uB and vB of the bounding disk separate. The pair (ffg, ggf) is left out:
// ffg o f^-1 = ggf o g^-1, so the union of those two pieces is a scaled copy
// of the whole curve and their meeting at z carries no information.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wiggle/geometry.hpp"

namespace wiggle {

struct WordPair {
  Word u;
  Word v;

  friend bool operator==(const WordPair&, const WordPair&) = default;
};

/// True for (ffg.w1, ggf.w2) with |w1| = |w2|.
bool extends_excluded_pair(const WordPair& p) noexcept;

/// The 15 length-3 pairs f.S_2 x g.S_2 minus (ffg, ggf), in lexicographic
/// order of (u, v).
std::vector<WordPair> initial_pairs();

struct RefineResult {
  bool separated = false;
  std::array<WordPair, 4> children{};  // (uf,vf), (uf,vg), (ug,vf), (ug,vg)
};

RefineResult refine_pair(const WordPair& pair, const Parameter& z, double margin);

/// Same as refine_pair, with the bounding disk precomputed.
bool pair_separated(const WordPair& pair, const Parameter& z, const Disk& bounding,
                    double margin);

struct EmbedBudgets {
  int max_depth = 40;
  std::int64_t max_pairs = 10'000'000;
  double margin = kDefaultTau;
  /// Inconclusive runs keep at most this many surviving pairs.
  std::size_t residue_cap = 1 << 14;
};

struct EmbedCertificate {
  Parameter z{Complex{0.5, 0.0}};
  double margin = 0.0;
  int max_depth = 0;
  std::int64_t pairs_examined = 0;
  bool terminated = false;
};

enum class InconclusiveReason { DepthExhausted, PairBudgetExhausted };

const char* to_string(InconclusiveReason r) noexcept;

struct EmbedOutcome {
  bool certified = false;
  EmbedCertificate certificate;
  std::optional<InconclusiveReason> reason;
  /// Word length of the deepest level examined.
  int depth_reached = 0;
  /// Pairs split so far; zero when all initial pairs separate.
  std::int64_t splits = 0;
  /// Examined pairs extending the excluded pair. Always zero.
  std::int64_t excluded_examined = 0;
  /// Surviving pairs of the deepest level, in worklist order.
  std::vector<WordPair> residue;
};

/// Level-synchronous FIFO worklist. Each call to step() examines the whole
/// current level and queues the children of every overlapping pair, in
/// order. Output is independent of the worker count.
class PairWorklist {
 public:
  PairWorklist(const Parameter& z, double margin);

  const std::vector<WordPair>& level() const noexcept { return level_; }
  int word_length() const noexcept { return level_.empty() ? length_ : level_.front().u.size(); }
  bool empty() const noexcept { return level_.empty(); }
  std::int64_t pairs_examined() const noexcept { return examined_; }
  std::int64_t splits() const noexcept { return splits_; }
  std::int64_t excluded_examined() const noexcept { return excluded_examined_; }

  /// Examines at most `limit` pairs of the current level (all when negative)
  /// and returns the overlapping ones. When the whole level was examined,
  /// the children of the overlapping pairs become the next level.
  std::vector<WordPair> step(std::int64_t limit = -1, bool expand = true);

 private:
  Parameter z_;
  Disk bounding_;
  double margin_;
  int length_ = 3;
  std::vector<WordPair> level_;
  std::int64_t examined_ = 0;
  std::int64_t splits_ = 0;
  std::int64_t excluded_examined_ = 0;
};

EmbedOutcome certify_in(const Parameter& z, const EmbedBudgets& budgets = {});

}  // namespace wiggle
