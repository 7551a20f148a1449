#pragma once

#include <stdexcept>
#include <string>

namespace dstk {

// Third outcome of a decision procedure: neither true nor false could be established.
class undecided_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class certificate_unavailable : public undecided_error {
 public:
  using undecided_error::undecided_error;
};

// A bounded search ran out of candidates.
class search_exhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Requested materialization exceeds a configured size bound.
class resource_limit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A query needs ranks or levels that have not been built.
class insufficient_materialization : public resource_limit {
 public:
  using resource_limit::resource_limit;
};

class precondition_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class parse_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace dstk
