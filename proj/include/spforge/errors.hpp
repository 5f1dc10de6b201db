// Error taxonomy shared by all spforge modules.
//
// Three broad classes matter for the CLI exit-code mapping:
//   math errors     -> exit 1 (a well-formed input hit a mathematical obstruction)
//   input errors    -> exit 2 (malformed or inconsistent input data)
//   internal errors -> exit 3 (a proven-impossible situation; always a bug)
#pragma once

#include <stdexcept>
#include <string>

namespace spf {

enum class errc {
  // fields
  not_prime,
  root_of_unity_missing,
  reducible,
  division_by_zero,
  not_divisor,
  not_coprime,
  // quivers
  not_skew_symmetrizable,
  has_2_cycle,
  // pathalg
  tower_mismatch,
  trunc_mismatch,
  arrow_unmapped,
  not_invertible,
  // potentials
  not_cyclic,
  unknown_arrow,
  not_through_k,
  // spmut
  no_valid_pairing,
  two_cycle_at_k,
  witness_failed,
  empty_subset,
  // dreps
  not_sink_or_source,
  // unfold
  diagonal_block_nonzero,
  not_divisible,
  bad_params,
  not_an_unfolding,
  unexpectedly_clean,
  bad_pairing,
  // generic
  invalid_argument,
  parse_error,
  validation_error,
  internal_error,
};

enum class err_class { math, input, internal };

inline err_class classify(errc c) {
  switch (c) {
    case errc::parse_error:
    case errc::validation_error:
    case errc::invalid_argument:
    case errc::bad_params:
      return err_class::input;
    case errc::witness_failed:
    case errc::unexpectedly_clean:
    case errc::internal_error:
      return err_class::internal;
    default:
      return err_class::math;
  }
}

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::not_prime: return "NotPrime";
    case errc::root_of_unity_missing: return "RootOfUnityMissing";
    case errc::reducible: return "Reducible";
    case errc::division_by_zero: return "DivisionByZero";
    case errc::not_divisor: return "NotDivisor";
    case errc::not_coprime: return "NotCoprime";
    case errc::not_skew_symmetrizable: return "NotSkewSymmetrizable";
    case errc::has_2_cycle: return "Has2Cycle";
    case errc::tower_mismatch: return "TowerMismatch";
    case errc::trunc_mismatch: return "TruncMismatch";
    case errc::arrow_unmapped: return "ArrowUnmapped";
    case errc::not_invertible: return "NotInvertible";
    case errc::not_cyclic: return "NotCyclic";
    case errc::unknown_arrow: return "UnknownArrow";
    case errc::not_through_k: return "NotThroughK";
    case errc::no_valid_pairing: return "NoValidPairing";
    case errc::two_cycle_at_k: return "TwoCycleAtK";
    case errc::witness_failed: return "WitnessFailed";
    case errc::empty_subset: return "EmptySubset";
    case errc::not_sink_or_source: return "NotSinkOrSource";
    case errc::diagonal_block_nonzero: return "DiagonalBlockNonzero";
    case errc::not_divisible: return "NotDivisible";
    case errc::bad_params: return "BadParams";
    case errc::not_an_unfolding: return "NotAnUnfolding";
    case errc::unexpectedly_clean: return "UnexpectedlyClean";
    case errc::bad_pairing: return "BadPairing";
    case errc::invalid_argument: return "InvalidArgument";
    case errc::parse_error: return "ParseError";
    case errc::validation_error: return "ValidationError";
    case errc::internal_error: return "InternalError";
  }
  return "Unknown";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

inline void require(bool cond, errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace spf
