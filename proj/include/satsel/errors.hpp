#ifndef SATSEL_ERRORS_HPP
#define SATSEL_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace satsel {

/// Base class for all computation errors raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A subset refers to indices outside the regressor set, or repeats one.
class InvalidSubsetError : public Error {
public:
  using Error::Error;
};

/// The full regressor set has rank < m where full rank is required.
class SingularUniverseError : public Error {
public:
  using Error::Error;
};

/// A projection heuristic exhausted the span before reaching m picks.
class RankDeficientError : public Error {
public:
  RankDeficientError(const std::string& what, std::int64_t achieved_rank)
      : Error(what), achieved_rank_(achieved_rank) {}
  std::int64_t achieved_rank() const noexcept { return achieved_rank_; }

private:
  std::int64_t achieved_rank_;
};

/// Requested subset size exceeds the number of available regressors.
class InfeasibleSizeError : public Error {
public:
  using Error::Error;
};

/// Every run inside a multi-run budget produced a singular subset.
class AllRunsSingularError : public Error {
public:
  AllRunsSingularError(const std::string& what, std::uint64_t attempts)
      : Error(what), attempts_(attempts) {}
  std::uint64_t attempts() const noexcept { return attempts_; }

private:
  std::uint64_t attempts_;
};

/// An enumeration guard (subset count, hypercube size) was exceeded.
class InstanceTooLargeError : public Error {
public:
  using Error::Error;
};

/// The approximate-design solver hit its iteration cap.
class ConvergenceFailureError : public Error {
public:
  ConvergenceFailureError(const std::string& what, double achieved_gap)
      : Error(what), achieved_gap_(achieved_gap) {}
  double achieved_gap() const noexcept { return achieved_gap_; }

private:
  double achieved_gap_;
};

/// File could not be read or written; message carries the path.
class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace satsel

#endif
