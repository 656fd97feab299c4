#include "wiggle/embed.hpp"

#include <algorithm>

#include "wiggle/parallel.hpp"
#include "wiggle/squiggle.hpp"

namespace wiggle {

namespace {

const Word kExcludedU{"ffg"};
const Word kExcludedV{"ggf"};

constexpr std::size_t kChunk = 4096;

}  // namespace

bool extends_excluded_pair(const WordPair& p) noexcept {
  return p.u.size() == p.v.size() && p.u.starts_with(kExcludedU) &&
         p.v.starts_with(kExcludedV);
}

std::vector<WordPair> initial_pairs() {
  static constexpr const char* kF[] = {"fff", "ffg", "fgf", "fgg"};
  static constexpr const char* kG[] = {"ggg", "ggf", "gfg", "gff"};
  std::vector<WordPair> out;
  out.reserve(15);
  for (const char* u : kF) {
    for (const char* v : kG) {
      WordPair p{Word(u), Word(v)};
      if (!extends_excluded_pair(p)) out.push_back(p);
    }
  }
  std::sort(out.begin(), out.end(), [](const WordPair& a, const WordPair& b) {
    const auto ka = a.u.to_string() + a.v.to_string();
    const auto kb = b.u.to_string() + b.v.to_string();
    return ka < kb;
  });
  return out;
}

bool pair_separated(const WordPair& pair, const Parameter& z, const Disk& bounding,
                    double margin) {
  const Disk du = image_disk(word_map(pair.u, z), bounding);
  const Disk dv = image_disk(word_map(pair.v, z), bounding);
  return disks_disjoint(du, dv, margin);
}

RefineResult refine_pair(const WordPair& pair, const Parameter& z, double margin) {
  if (pair.u.size() != pair.v.size()) {
    throw InvalidParameter("refine_pair needs words of equal length");
  }
  RefineResult r;
  r.separated = pair_separated(pair, z, bounding_disk(z), margin);
  if (!r.separated) {
    const Word uf = pair.u.appended(Letter::F), ug = pair.u.appended(Letter::G);
    const Word vf = pair.v.appended(Letter::F), vg = pair.v.appended(Letter::G);
    r.children = {WordPair{uf, vf}, WordPair{uf, vg}, WordPair{ug, vf}, WordPair{ug, vg}};
  }
  return r;
}

const char* to_string(InconclusiveReason r) noexcept {
  switch (r) {
    case InconclusiveReason::DepthExhausted:
      return "depth-exhausted";
    case InconclusiveReason::PairBudgetExhausted:
      return "pair-budget-exhausted";
  }
  return "unknown";
}

PairWorklist::PairWorklist(const Parameter& z, double margin)
    : z_(z), bounding_(bounding_disk(z)), margin_(margin), level_(initial_pairs()) {
  if (margin < 0) throw InvalidParameter("margin must be nonnegative");
}

std::vector<WordPair> PairWorklist::step(std::int64_t limit, bool expand) {
  const std::size_t n =
      limit < 0 ? level_.size() : std::min(level_.size(), static_cast<std::size_t>(limit));
  std::vector<std::uint8_t> overlap(n, 0);
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t end = std::min(n, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      overlap[i] = pair_separated(level_[i], z_, bounding_, margin_) ? 0 : 1;
    }
  });

  std::vector<WordPair> survivors;
  for (std::size_t i = 0; i < n; ++i) {
    if (extends_excluded_pair(level_[i])) ++excluded_examined_;
    if (overlap[i]) survivors.push_back(level_[i]);
  }
  examined_ += static_cast<std::int64_t>(n);
  if (n < level_.size() || !expand) {
    level_.erase(level_.begin(), level_.begin() + static_cast<std::ptrdiff_t>(n));
    return survivors;
  }

  std::vector<WordPair> next;
  next.reserve(4 * survivors.size());
  for (const WordPair& p : survivors) {
    const Word uf = p.u.appended(Letter::F), ug = p.u.appended(Letter::G);
    const Word vf = p.v.appended(Letter::F), vg = p.v.appended(Letter::G);
    next.push_back({uf, vf});
    next.push_back({uf, vg});
    next.push_back({ug, vf});
    next.push_back({ug, vg});
  }
  splits_ += static_cast<std::int64_t>(survivors.size());
  level_ = std::move(next);
  ++length_;
  return survivors;
}

EmbedOutcome certify_in(const Parameter& z, const EmbedBudgets& budgets) {
  if (budgets.max_depth < 3 || budgets.max_pairs <= 0) {
    throw InvalidParameter("certify_in budgets must be positive");
  }
  PairWorklist worklist(z, budgets.margin);
  EmbedOutcome out;
  out.certificate.z = z;
  out.certificate.margin = budgets.margin;
  out.certificate.max_depth = budgets.max_depth;

  auto keep_residue = [&](std::vector<WordPair> survivors) {
    if (survivors.size() > budgets.residue_cap) survivors.resize(budgets.residue_cap);
    out.residue = std::move(survivors);
  };

  std::vector<WordPair> last;
  while (!worklist.empty()) {
    const int length = worklist.word_length();
    out.depth_reached = length;
    const std::int64_t remaining = budgets.max_pairs - worklist.pairs_examined();
    if (remaining < static_cast<std::int64_t>(worklist.level().size())) {
      keep_residue(remaining > 0 ? worklist.step(remaining, false) : std::move(last));
      out.reason = InconclusiveReason::PairBudgetExhausted;
      break;
    }
    if (length >= budgets.max_depth) {
      auto survivors = worklist.step(-1, false);
      if (!survivors.empty()) {
        keep_residue(std::move(survivors));
        out.reason = InconclusiveReason::DepthExhausted;
      }
      break;
    }
    last = worklist.step();
  }

  out.certified = !out.reason.has_value();
  out.splits = worklist.splits();
  out.excluded_examined = worklist.excluded_examined();
  out.certificate.pairs_examined = worklist.pairs_examined();
  out.certificate.terminated = out.certified;
  return out;
}

}  // namespace wiggle
