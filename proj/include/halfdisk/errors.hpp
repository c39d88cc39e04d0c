#pragma once

#include <stdexcept>
#include <string>

namespace halfdisk {

/// Input violates an operation's contract. The CLI maps this family to exit code 2.
class precondition_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class dimension_error : public precondition_error {
public:
    using precondition_error::precondition_error;
};

/// A series ran out of coefficients before the question could be decided.
class truncation_error : public precondition_error {
public:
    using precondition_error::precondition_error;
};

/// J + J_st or Id - W is singular / badly conditioned, or W is not a contraction.
class taming_error : public precondition_error {
public:
    using precondition_error::precondition_error;
};

/// Iterative solve failed to contract (data too large for the chosen domain).
class convergence_error : public precondition_error {
public:
    using precondition_error::precondition_error;
};

/// Numerical verification did not succeed within its budget.
class verification_error : public precondition_error {
public:
    using precondition_error::precondition_error;
};

}  // namespace halfdisk
