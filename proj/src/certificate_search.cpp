#include <map>

#include "mhv/verifier.hpp"

namespace mhv {
namespace {

using detail::BranchCursor;
using detail::BranchRunner;
using Status = BranchCursor::Status;
using Ensemble = std::vector<BranchCursor>;

// (number of branches with the target verdict, certificate length); larger
// count first, then shorter certificate.
struct Score {
  int count = 0;
  int length = 0;

  bool betterThan(const Score& other) const {
    return count != other.count ? count > other.count : length < other.length;
  }
  bool operator==(const Score&) const = default;
};

// Every branch of every ensemble in the graph has consumed exactly as many
// certificate symbols as the depth at which the ensemble was first reached,
// so one symbol is delivered to all awaiting branches at once.
class EnsembleGraph {
 public:
  EnsembleGraph(const VerifierMachine& verifier, std::string_view input, Verdict target)
      : verifier_(verifier), tape_(input), target_(target), symbols_(certificateAlphabet(verifier)) {
    const int budget = verifier.coinBudget();
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << budget); ++i) {
      runners_.emplace_back(verifier, tape_, coinString(i, budget));
    }
  }

  BestCertificate solve(int maxLength) {
    Ensemble root;
    std::uint64_t steps = 0;
    for (const auto& runner : runners_) root.push_back(runner.begin(steps));
    intern(std::move(root), 0);
    // Breadth-first expansion; a node first seen at depth d needs scores for
    // remaining budgets 0..maxLength-d.
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (depth_[i] >= maxLength || terminal(nodes_[i])) continue;
      std::vector<int> next;
      next.reserve(symbols_.size());
      for (SymbolId symbol : symbols_) {
        Ensemble child = nodes_[i];
        std::uint64_t ignored = 0;
        for (std::size_t b = 0; b < child.size(); ++b) runners_[b].deliver(child[b], symbol, ignored);
        next.push_back(intern(std::move(child), depth_[i] + 1));
      }
      children_[i] = std::move(next);
    }

    scores_.resize(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      scores_[i].assign(static_cast<std::size_t>(maxLength - depth_[i] + 1), Score{});
      scores_[i][0] = Score{padCount(nodes_[i]), 0};
    }
    for (int budget = 1; budget <= maxLength; ++budget) {
      for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (maxLength - depth_[i] < budget) continue;
        Score best = scores_[i][0];
        for (int child : children_[i]) {
          const Score& s = scores_[static_cast<std::size_t>(child)][static_cast<std::size_t>(budget - 1)];
          Score candidate{s.count, s.length + 1};
          if (candidate.betterThan(best)) best = candidate;
        }
        scores_[i][static_cast<std::size_t>(budget)] = best;
      }
    }

    BestCertificate result;
    Score goal = scores_[0][static_cast<std::size_t>(maxLength)];
    std::size_t node = 0;
    int budget = maxLength;
    while (goal.length > 0) {
      const auto& kids = children_[node];
      for (std::size_t c = 0; c < kids.size(); ++c) {
        const auto child = static_cast<std::size_t>(kids[c]);
        if (scores_[child][static_cast<std::size_t>(budget - 1)] == Score{goal.count, goal.length - 1}) {
          result.cert.symbols.push_back(symbols_[c]);
          node = child;
          break;
        }
      }
      --budget;
      --goal.length;
    }
    Rational p = Rational(goal.count) * inversePowerOfTwo(static_cast<unsigned>(verifier_.coinBudget()));
    p.canonicalize();
    result.pAccept = p;
    return result;
  }

 private:
  static bool terminal(const Ensemble& e) {
    for (const auto& c : e) {
      if (c.status == Status::Awaiting) return false;
    }
    return true;
  }

  bool hits(Status status) const {
    switch (target_) {
      case Verdict::Accept: return status == Status::Accepted;
      case Verdict::Reject: return status == Status::Rejected;
      case Verdict::Nonhalt: return status == Status::Looping;
    }
    return false;
  }

  int padCount(const Ensemble& e) const {
    int count = 0;
    for (std::size_t b = 0; b < e.size(); ++b) {
      BranchCursor cursor = e[b];
      std::uint64_t ignored = 0;
      runners_[b].finishWithPad(cursor, ignored);
      if (hits(cursor.status)) ++count;
    }
    return count;
  }

  int intern(Ensemble e, int depth) {
    auto [it, inserted] = index_.try_emplace(std::move(e), static_cast<int>(nodes_.size()));
    if (inserted) {
      nodes_.push_back(it->first);
      depth_.push_back(depth);
      children_.emplace_back();
    }
    return it->second;
  }

  const VerifierMachine& verifier_;
  Tape tape_;
  Verdict target_;
  std::vector<SymbolId> symbols_;
  std::vector<BranchRunner> runners_;
  std::map<Ensemble, int> index_;
  std::vector<Ensemble> nodes_;
  std::vector<int> depth_;
  std::vector<std::vector<int>> children_;
  std::vector<std::vector<Score>> scores_;
};

}  // namespace

BestCertificate maximiseOutcome(const VerifierMachine& verifier, std::string_view input, int maxLength,
                                Verdict target) {
  requireInputOverAlphabet(verifier.alphabet(), input);
  if (maxLength < 0) throw std::invalid_argument("maximum certificate length must be non-negative");
  EnsembleGraph graph(verifier, input, target);
  return graph.solve(maxLength);
}

BestCertificate bestCertificate(const VerifierMachine& verifier, std::string_view input, int maxLength) {
  return maximiseOutcome(verifier, input, maxLength, Verdict::Accept);
}

}  // namespace mhv
