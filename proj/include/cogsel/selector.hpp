#pragma once

#include "cogsel/model.hpp"

#include <string_view>
#include <vector>

namespace cogsel {

enum class Method { coarse, fine, exhaustive };

std::string_view to_string(Method m);
/// Throws Error for an unknown name.
Method parse_method(std::string_view name);

/// One pass of the set iteration: the level computed from the previous set
/// and the set selected at that level.
struct IterationStep {
    double water_level = 0.0;
    SensingSet selected;
};

struct OptResult {
    Method method = Method::coarse;
    SensingSet sensing;
    Allocation alloc;             // solve_waterfill(inst, sensing)
    int iterations = 0;
    bool certified_optimal = false;
    double lambda_min = 0.0;      // coarse water level, carried into the fine stage
    bool cycled = false;          // the set iteration revisited a set before converging
    SensingSet initial;           // S_0
    std::vector<IterationStep> trace;
};

/// Fixed-point selection that drives the water level down.
///
/// Starts from the L channels with the largest q_n, then alternates
/// water-filling and re-selecting up to L channels with the largest positive
/// q_n (lambda - sigma_n^2) until the set repeats. Ties go to the lower index.
/// If the iteration returns to an older set, the best-capacity set visited is
/// returned. Throws Error when no channel has q_n > 0.
OptResult coarse_optimize(const Instance& inst);

/// True iff every channel outside the coarse set has sigma^2 >= lambda_min,
/// which makes the coarse set optimal.
bool lemma1_certificate(const Instance& inst, const OptResult& coarse);

/// Channels with sigma_n^2 <= lambda_min.
SensingSet candidate_set(const Instance& inst, double lambda_min);

/// Untruncated budget solution (sum q sigma^2 + P) / sum q over the set.
/// Throws DegenerateSetError for zero total width.
double fine_lambda(const Instance& inst, const SensingSet& sensing);

/// lambda - sigma^2 exp(1 - sigma^2 / lambda); positive iff the channel may
/// be included at this level.
double fine_score(double lambda, double noise_var);

/// Ordering of admissible candidates in the fine stage.
enum class FineRanking {
    /// q_n ln(lambda / (sigma_n^2 exp(1 - sigma_n^2 / lambda))): the per-channel
    /// KKT marginal, whose common threshold is the multiplier of the L constraint.
    kkt_weighted,
    /// fine_score alone. Ignores q_n, so it ranks by noise variance only.
    unweighted,
};

/// q_n ln(lambda / (sigma_n^2 e^{1 - sigma_n^2/lambda})). Same sign as fine_score.
double fine_rank_key(double lambda, const ChannelProfile& ch);

/// Refines the coarse set over the candidate channels.
///
/// Iterates lambda_j = fine_lambda(S_{j-1}) and keeps up to L candidates with
/// positive fine_score, ordered per `ranking` (lower index on ties), until
/// the set repeats. Returns the coarse selection (tagged fine) when the
/// coarse result is certified or selected fewer than L channels.
OptResult fine_optimize(const Instance& inst, const OptResult& coarse,
                        FineRanking ranking = FineRanking::kkt_weighted);

/// Coarse then fine; the higher-capacity result, certified when the coarse
/// certificate holds.
OptResult joint_optimize(const Instance& inst);

}  // namespace cogsel
