#pragma once

#include <stdexcept>
#include <string>

namespace opilex {

// Base for everything this library throws; callers that only care about
// "data problem vs. bug" can catch this and std::logic_error separately.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MalformedRecord : Error { using Error::Error; };
struct EmptyCorpus : Error { using Error::Error; };
struct EmptyQuery : Error { using Error::Error; };
struct InvalidMatrix : Error { using Error::Error; };
struct DegenerateVocabulary : Error { using Error::Error; };
struct UnknownTerm : Error { using Error::Error; };
struct ZeroVector : Error { using Error::Error; };
struct CorruptModel : Error { using Error::Error; };
struct VersionMismatch : Error { using Error::Error; };
struct NoSeedsInVocabulary : Error { using Error::Error; };
struct MalformedReviewFile : Error { using Error::Error; };
struct DuplicateTermAssignment : Error { using Error::Error; };
struct NoTermsAccepted : Error { using Error::Error; };
struct ZeroSeedVolume : Error { using Error::Error; };
struct SameCategory : Error { using Error::Error; };
struct DegenerateTable : Error { using Error::Error; };
struct EmptyRange : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace opilex
