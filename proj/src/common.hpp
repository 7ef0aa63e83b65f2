#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace hyko {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;   // complex grid/product-space vector
using RVec = Eigen::VectorXd;
using Mat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using SpRMat = Eigen::SparseMatrix<double>;
using SpCMat = Eigen::SparseMatrix<Complex>;

inline constexpr Complex kImag{0.0, 1.0};

// Error taxonomy shared across the library; the C API and the CLI map these
// onto status codes / exit codes.
enum class ErrorCode {
  invalid_argument,
  parse,
  validation,
  numerical,
  unsupported,
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string field = {})
      : std::runtime_error(std::move(message)), code_(code), field_(std::move(field)) {}
  ErrorCode code() const { return code_; }
  const std::string& field() const { return field_; }

 private:
  ErrorCode code_;
  std::string field_;
};

struct ConfigError : Error {
  explicit ConfigError(std::string msg, std::string field = {})
      : Error(ErrorCode::invalid_argument, std::move(msg), std::move(field)) {}
};
struct ParseError : Error {
  ParseError(std::string msg, int line, int column)
      : Error(ErrorCode::parse, std::move(msg)), line(line), column(column) {}
  int line;
  int column;
};
struct ValidationError : Error {
  explicit ValidationError(std::string msg, std::string field = {})
      : Error(ErrorCode::validation, std::move(msg), std::move(field)) {}
};
struct NumericalError : Error {
  explicit NumericalError(std::string msg) : Error(ErrorCode::numerical, std::move(msg)) {}
};
struct UnsupportedError : Error {
  explicit UnsupportedError(std::string msg) : Error(ErrorCode::unsupported, std::move(msg)) {}
};

}  // namespace hyko
