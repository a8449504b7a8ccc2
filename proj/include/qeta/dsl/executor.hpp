#pragma once

#include <cstddef>
#include <vector>

#include "qeta/dsl/ast.hpp"
#include "qeta/report.hpp"
#include "qeta/series.hpp"

namespace qeta::dsl {

/// Runs the statements in order and returns one report per assertion, plus
/// an error report for every binding that could not be established.
///
/// Eta expressions stay symbolic (exponent maps with a rational scalar) until
/// an assertion needs coefficients; U_p forces its operand to a q-expansion.
/// Failures and errors never stop later statements.
///
/// `precision` is used where an assertion does not fix its own term count.
std::vector<VerificationReport> execute_program(const Program& program, std::size_t precision = default_precision);

} // namespace qeta::dsl
