#pragma once

#include <array>
#include <string>
#include <string_view>
#include <variant>

#include "poisest/model.hpp"
#include "poisest/synth.hpp"

namespace poisest {

// Estimators of the study-variable mean Ybar from (xbar, ybar) and the known
// auxiliary mean Xbar.

struct MeanOnly {};                    // ybar
struct Ratio {};                       // ybar * Xbar / xbar
struct Product {};                     // ybar * xbar / Xbar
struct ExpRatio {};                    // ybar * exp((Xbar - xbar) / (Xbar + xbar))
struct ExpProduct {};                  // ybar * exp((xbar - Xbar) / (xbar + Xbar))
struct ExpAlpha { double alpha = 0.0; };  // ybar * exp(alpha (Xbar - xbar) / (Xbar + xbar))
struct Difference { double b = 0.0; };    // ybar + b (Xbar - xbar)

/// Generalised class:
///   w1 ybar (Xbar/xbar)^alpha exp(eta (Xbar - xbar) / (eta (Xbar + xbar) + 2 theta))
///     + w2 xbar + (1 - w1 - w2) Xbar
struct General {
  double w1 = 1.0;
  double w2 = 0.0;
  double alpha = 0.0;
  double eta = 0.0;
  double theta = 1.0;
};

using EstimatorSpec =
    std::variant<MeanOnly, Ratio, Product, ExpRatio, ExpProduct, ExpAlpha, Difference, General>;

/// Throws ValidationError if any parameter is non-finite.
void validate(const EstimatorSpec& spec);

/// Short stable name, e.g. "exp-alpha".
std::string_view family_name(const EstimatorSpec& spec) noexcept;

/// Human-readable label including parameters, e.g. "exp-alpha(alpha=0.5)".
std::string describe(const EstimatorSpec& spec);

/// Point estimate. Depends on the sample only through (xbar, ybar).
/// Throws SingularDenominatorError naming the offending term when xbar = 0
/// meets the ratio, an exponential estimator with alpha != 0 or a General
/// spec with alpha != 0, or when eta (Xbar + xbar) + 2 theta = 0.
double evaluate(const EstimatorSpec& spec, SampleMeans means, double xbar_pop);
double evaluate(const EstimatorSpec& spec, const SampleStats& stats, double xbar_pop);

/// Named members of the generalised class.
enum class MemberId { m1, m2, m3, m4, m5, m6, m7, q1, q2, q3, q4, q5, q6, q7, q8, q9 };

inline constexpr std::array<MemberId, 16> kAllMembers = {
    MemberId::m1, MemberId::m2, MemberId::m3, MemberId::m4, MemberId::m5, MemberId::m6,
    MemberId::m7, MemberId::q1, MemberId::q2, MemberId::q3, MemberId::q4, MemberId::q5,
    MemberId::q6, MemberId::q7, MemberId::q8, MemberId::q9};

std::string_view to_string(MemberId id) noexcept;
/// Accepts "m1".."m7", "q1".."q9"; throws ValidationError otherwise.
MemberId parse_member(std::string_view text);

/// A member with its table parameters substituted. Free parameters are
/// flagged; the numeric value held in `spec` for a free parameter is only a
/// placeholder (w1 = 1, alpha = 1) until theory fills it in.
struct ResolvedMember {
  MemberId id;
  General spec;
  bool w1_free = false;
  bool alpha_free = false;
};

/// Substitutes rho and Xbar from `pop` where the tables call for them.
/// w2 is always pinned to 0.
ResolvedMember resolve_named_member(MemberId id, const PopulationMoments& pop);

}  // namespace poisest
