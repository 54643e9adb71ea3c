#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rab {

// Malformed user input: unknown generator, bad config, mismatched systems.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A well-formed request outside an operation's domain.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A configured cap was exceeded. `partial` is how far we got.
struct SizeError : std::runtime_error {
  SizeError(const std::string& what, std::size_t partial_count)
      : std::runtime_error(what), partial(partial_count) {}
  std::size_t partial;
};

// A structural check failed on data that should satisfy it.
struct VerificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Broken internal invariant.
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace rab
