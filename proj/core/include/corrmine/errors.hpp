#pragma once

#include <stdexcept>
#include <string>

namespace corrmine {

enum class errc {
  too_few_samples,
  non_finite_input,
  zero_variance,
  singular_matrix,
  non_positive_diagonal,
  not_symmetric,
  domain_error,
  no_solution,
  role_mismatch,
  dimension_mismatch,
  infeasible_sparsity,
  unsupported_rank,
  not_positive_definite,
  diverged,
  infeasible_level,
  missing_kappa,
  io_error,
  config_error,
  numerical_error,
};

inline const char* errc_name(errc code) {
  switch (code) {
    case errc::too_few_samples: return "too_few_samples";
    case errc::non_finite_input: return "non_finite_input";
    case errc::zero_variance: return "zero_variance";
    case errc::singular_matrix: return "singular_matrix";
    case errc::non_positive_diagonal: return "non_positive_diagonal";
    case errc::not_symmetric: return "not_symmetric";
    case errc::domain_error: return "domain_error";
    case errc::no_solution: return "no_solution";
    case errc::role_mismatch: return "role_mismatch";
    case errc::dimension_mismatch: return "dimension_mismatch";
    case errc::infeasible_sparsity: return "infeasible_sparsity";
    case errc::unsupported_rank: return "unsupported_rank";
    case errc::not_positive_definite: return "not_positive_definite";
    case errc::diverged: return "diverged";
    case errc::infeasible_level: return "infeasible_level";
    case errc::missing_kappa: return "missing_kappa";
    case errc::io_error: return "io_error";
    case errc::config_error: return "config_error";
    case errc::numerical_error: return "numerical_error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

// Parameter/ingestion problems map to CLI exit code 2, numerical failures to 3.
inline bool is_config_error(errc code) {
  switch (code) {
    case errc::too_few_samples:
    case errc::non_finite_input:
    case errc::dimension_mismatch:
    case errc::infeasible_sparsity:
    case errc::unsupported_rank:
    case errc::role_mismatch:
    case errc::domain_error:
    case errc::io_error:
    case errc::config_error:
      return true;
    default:
      return false;
  }
}

}  // namespace corrmine
