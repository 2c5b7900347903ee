#pragma once

#include <cstdint>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "bco/adversary.hpp"
#include "bco/learner.hpp"

namespace bco {

struct RoundRecord {
    std::uint64_t t = 0;
    std::size_t epoch = 0;
    std::size_t generation = 0;
    Vec x;
    std::size_t arm = 0;
    double loss = 0.0;
    double shift = 0.0;
    std::size_t grid_size = 0;
    bool decide_move = false;
    bool restart = false;
    LossFunction f;
};

/// One played game. `f` of every round is enough to re-evaluate the loss
/// anywhere, and f(x) reproduces `loss` bit for bit.
struct GameRecord {
    LearnerConfig learner;
    AdversarySpec adversary;
    ConvexBody body;
    std::uint64_t horizon = 0;
    std::uint64_t seed = 0;
    std::vector<RoundRecord> rounds;
    std::vector<EpochSummary> epochs;  // in order of play, the last one closed at the horizon
    std::size_t cap_hits = 0;
    std::size_t inconsistent_fits = 0;
    bool partial = false;  // the game aborted; `error` says why
    std::string error;
};

/// Plays T rounds. The learner sees one scalar per round; the adversary sees
/// only past plays. Errors abort the game and return a partial record.
[[nodiscard]] GameRecord run_game(const ConvexBody& k, const LearnerConfig& config,
                                  const AdversarySpec& spec, std::uint64_t horizon,
                                  std::uint64_t seed);

[[nodiscard]] nlohmann::json body_to_json(const ConvexBody& k);
[[nodiscard]] ConvexBody body_from_json(const nlohmann::json& j);

/// JSON lines: a header, one line per round, one per epoch, then a footer.
void write_record(std::ostream& out, const GameRecord& record);
[[nodiscard]] GameRecord read_record(std::istream& in);

}  // namespace bco
