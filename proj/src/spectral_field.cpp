#include "euler_lab/spectral_field.hpp"

#include <string>

namespace euler_lab {

SpectralField::SpectralField(const GridSpec& grid, Rank rank, bool hermitian)
    : grid_(grid), rank_(rank), hermitian_(hermitian),
      coeffs_(grid.points() * static_cast<std::size_t>(rank)) {
  grid_.validate();
}

std::span<cplx> SpectralField::component(int c) {
  if (c < 0 || c >= components()) throw ContractViolation("component index out of range");
  return coeffs().subspan(static_cast<std::size_t>(c) * grid_.points(), grid_.points());
}

std::span<const cplx> SpectralField::component(int c) const {
  if (c < 0 || c >= components()) throw ContractViolation("component index out of range");
  return coeffs().subspan(static_cast<std::size_t>(c) * grid_.points(), grid_.points());
}

cplx SpectralField::mode(int c, int k1, int k2, int k3) const {
  return at(c, grid_.index_of(k1), grid_.index_of(k2), grid_.index_of(k3));
}

void SpectralField::set_mode(int c, int k1, int k2, int k3, cplx value) {
  const int h = grid_.n / 2;
  if (k1 < -h || k1 >= h || k2 < -h || k2 >= h || k3 < -h || k3 >= h)
    throw ContractViolation("wavevector outside grid: " + std::to_string(k1) + "," +
                            std::to_string(k2) + "," + std::to_string(k3));
  at(c, grid_.index_of(k1), grid_.index_of(k2), grid_.index_of(k3)) = value;
}

void SpectralField::require_compatible(const SpectralField& other) const {
  if (!(grid_ == other.grid_)) throw ContractViolation("fields live on different grids");
  if (rank_ != other.rank_) throw ContractViolation("fields have different ranks");
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_compatible(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  hermitian_ = hermitian_ && other.hermitian_;
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_compatible(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  hermitian_ = hermitian_ && other.hermitian_;
  return *this;
}

SpectralField& SpectralField::operator*=(cplx scale) {
  for (auto& c : coeffs_) c *= scale;
  if (scale.imag() != 0.0) hermitian_ = false;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) {
  a += b;
  return a;
}
SpectralField operator-(SpectralField a, const SpectralField& b) {
  a -= b;
  return a;
}
SpectralField operator-(SpectralField a) {
  a *= -1.0;
  return a;
}
SpectralField operator*(cplx scale, SpectralField f) {
  f *= scale;
  return f;
}

}  // namespace euler_lab
