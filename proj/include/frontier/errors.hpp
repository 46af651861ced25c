#pragma once

#include <stdexcept>
#include <string>

namespace frontier {

// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// ---- dataset validation ----
class EmptyDataset final : public Error {
  public:
    using Error::Error;
};
class NonPositiveInput final : public Error {
  public:
    using Error::Error;
};
class NegativeOutput final : public Error {
  public:
    using Error::Error;
};
class AllZeroOutputs final : public Error {
  public:
    using Error::Error;
};
class DuplicateId final : public Error {
  public:
    using Error::Error;
};
class RaggedRow final : public Error {
  public:
    using Error::Error;
};

// ---- statistics ----
class EmptyVector final : public Error {
  public:
    using Error::Error;
};
class ZeroVariance final : public Error {
  public:
    using Error::Error;
};

// ---- solvers ----
class DimensionMismatch final : public Error {
  public:
    using Error::Error;
};
class SolverFailure : public Error {
  public:
    using Error::Error;
};
class NumericalBreakdown final : public SolverFailure {
  public:
    using SolverFailure::SolverFailure;
};
class InfeasibleEpsilon final : public SolverFailure {
  public:
    using SolverFailure::SolverFailure;
};
class IntractableSize final : public Error {
  public:
    using Error::Error;
};

// ---- sequential exclusion ----
class EmptyActiveSet final : public Error {
  public:
    using Error::Error;
};
class DegenerateSample final : public Error {
  public:
    using Error::Error;
};

// ---- rankings ----
class NonFiniteScore final : public Error {
  public:
    using Error::Error;
};
class IdSetMismatch final : public Error {
  public:
    using Error::Error;
};

// ---- ingestion / configuration ----
class ParseError final : public Error {
  public:
    using Error::Error;
};
class ConfigError final : public Error {
  public:
    using Error::Error;
};

}  // namespace frontier
