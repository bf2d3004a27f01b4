#pragma once

#include <stdexcept>
#include <string>

namespace mirrorplan::hs {

/// Two vectors that must have equal length did not.
class LengthMismatch : public std::invalid_argument {
public:
    explicit LengthMismatch(const std::string& what) : std::invalid_argument(what) {}
};

/// A memory slot could not be filled with an evaluable, sufficiently distinct design.
class InitializationExhausted : public std::runtime_error {
public:
    explicit InitializationExhausted(const std::string& what) : std::runtime_error(what) {}
};

/// Improvisation kept producing designs the evaluator rejects.
class EvaluationExhausted : public std::runtime_error {
public:
    explicit EvaluationExhausted(const std::string& what) : std::runtime_error(what) {}
};

/// Only feasible members may enter the Pareto archive.
class InfeasibleMember : public std::invalid_argument {
public:
    explicit InfeasibleMember(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace mirrorplan::hs
