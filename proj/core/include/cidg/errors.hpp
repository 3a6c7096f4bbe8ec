#ifndef CIDG_ERRORS_HPP
#define CIDG_ERRORS_HPP

#include <array>
#include <stdexcept>
#include <string>

namespace cidg {

//! Evaluation left the model's domain (potential singularity, non-finite
//! field value, non-finite state). Carries the offending position and,
//! when raised from a discrete-gradient mixed point, the phase coordinate
//! index that was being flipped (-1 otherwise).
class domain_error : public std::runtime_error {
 public:
  domain_error(const std::string& what, std::array<double, 3> where,
               int coordinate = -1)
      : std::runtime_error(what), where_(where), coordinate_(coordinate) {}

  const std::array<double, 3>& where() const { return where_; }
  int coordinate() const { return coordinate_; }

 private:
  std::array<double, 3> where_;
  int coordinate_;
};

//! Fixed-point solve of an implicit step did not reach fp_tol within
//! fp_max_iter iterations (or diverged to a non-finite iterate).
class solver_error : public std::runtime_error {
 public:
  solver_error(const std::string& what, int iterations, double residual)
      : std::runtime_error(what), iterations_(iterations), residual_(residual) {}

  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

//! File could not be read, written, or parsed.
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cidg

#endif  // CIDG_ERRORS_HPP
