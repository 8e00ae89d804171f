#ifndef UBOCO_ERROR_HPP
#define UBOCO_ERROR_HPP

#include <stdexcept>
#include <string>

namespace uboco {

/// Malformed file contents (bad magic, truncated payload, unparsable text).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Values that violate a domain invariant (ranges, ordering, shapes).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem failures; the message carries the offending path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace uboco

#endif  // UBOCO_ERROR_HPP
