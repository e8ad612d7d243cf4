#pragma once

#include <stdexcept>
#include <string>

namespace tlsqle {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// --- parameter validation ---
struct NonPositiveKappa : Error { using Error::Error; };
struct NegativeRate : Error { using Error::Error; };
struct NonFinite : Error { using Error::Error; };

// --- steady state ---
struct RootRefinementFailed : Error { using Error::Error; };

// --- linear response / spectrum ---
struct SingularResponse : Error { using Error::Error; };
struct NoPeak : Error { using Error::Error; };
struct UnresolvedPeak : Error { using Error::Error; };

// --- time domain ---
struct UnstableSteadyState : Error { using Error::Error; };
struct StepTooLarge : Error { using Error::Error; };
struct Divergence : Error { using Error::Error; };
struct TooFewSamples : Error { using Error::Error; };
struct UnsupportedScheme : Error { using Error::Error; };

// --- spin / boson matrix lab ---
struct InvalidJ : Error { using Error::Error; };
struct TooLarge : Error { using Error::Error; };
struct SubspaceTooLarge : Error { using Error::Error; };

// --- configuration / I/O ---
struct ParseError : Error { using Error::Error; };
struct UsageError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace tlsqle
