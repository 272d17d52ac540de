// Common dense types, enums and error classes shared by every module.
#ifndef CFTHP_TYPES_HPP
#define CFTHP_TYPES_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cfthp {

using Real = double;
using Complex = std::complex<Real>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using CMatrix = Matrix<Complex>;
using CVector = Vector<Complex>;
using RMatrix = Matrix<Real>;
using RVector = Vector<Real>;

using Seed = std::uint64_t;

/// Where the THP scaling matrix C lives.
enum class ThpStructure { centralized, decentralized };

/// Which channel the precoder is built from: all APs, the AP-selected sparse
/// channel, or per-user reduced clusters.
enum class Variant { network_wide, sparse, reduced };

enum class Scheme { mf, zf, cthp, dthp };

enum class Modulation { qpsk, qam16 };

/// Scale factor in G^T = (Gbar^T - Gerr^T) / tau.
enum class TauMode {
  paper,      ///< tau = sqrt(1 + sigma_e^2)
  consistent  ///< tau = sqrt(1 - sigma_e^2), matching the estimate model
};

/// How the self-distortion of the desired stream enters the SINR denominator.
enum class SelfDistortion {
  cross_term,   ///< |a|^2 - 2 Re(a); may leave a nonpositive denominator
  error_power   ///< |a|^2; denominator is always positive
};

class SingularFactorization : public std::runtime_error {
 public:
  SingularFactorization(const std::string& what, Eigen::Index row)
      : std::runtime_error(what), row_(row) {}
  Eigen::Index row() const noexcept { return row_; }

 private:
  Eigen::Index row_;
};

class DegenerateSinr : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

std::string_view to_string(ThpStructure s);
std::string_view to_string(Variant v);
std::string_view to_string(Modulation m);
std::string_view to_string(TauMode m);
std::string_view to_string(SelfDistortion m);

Modulation parse_modulation(std::string_view text);
TauMode parse_tau_mode(std::string_view text);
SelfDistortion parse_self_distortion(std::string_view text);

}  // namespace cfthp

#endif  // CFTHP_TYPES_HPP
