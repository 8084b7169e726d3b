#pragma once

#include <cstdint>
#include <istream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mtsfm {

/// Raised when phase-code text input cannot be parsed. Carries the 1-based
/// line number of the offending line (0 for whole-input errors).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Ordered chip phases (radians) of a phase-coded pulse.
class PhaseCode {
 public:
  PhaseCode(std::vector<double> phases, std::string label = {});

  std::span<const double> phases() const noexcept { return phases_; }
  std::size_t size() const noexcept { return phases_.size(); }
  const std::string& label() const noexcept { return label_; }
  double operator[](std::size_t i) const { return phases_[i]; }

 private:
  std::vector<double> phases_;
  std::string label_;
};

/// Tap mask of the built-in primitive polynomial for an LFSR of the given
/// degree (2..16). Bit j of the mask is the coefficient of x^j; bit `degree`
/// is always set and the constant term is implied.
std::uint32_t primitive_taps(int degree);

/// Maximal-length sequence of period 2^degree - 1 mapped to {0, pi}.
///
/// The register holds a_0..a_{d-1} (bit i of `seed` is a_i) and advances by
/// a_{n+d} = a_n + sum_{j=1}^{d-1} c_j a_{n+j} over GF(2), where c_j is bit j
/// of `taps`. Output bit 1 maps to pi. Primitivity of `taps` is not checked;
/// a non-primitive mask silently yields a shorter period.
PhaseCode generate_msequence(int degree, std::uint32_t taps, std::uint32_t seed);

/// Lengths accepted by barker_code().
std::span<const int> barker_lengths();

/// Binary Barker code as {0, pi} phases. Length 2 uses the (+, -) variant
/// and length 4 uses (+, +, -, +).
PhaseCode barker_code(int length);

/// Reads one radian value per line. Lines starting with '#' (after leading
/// whitespace) and blank lines are skipped.
PhaseCode load_phase_code(std::istream& in, std::string label = {});
PhaseCode load_phase_code_file(const std::string& path);

void write_phase_code(std::ostream& out, const PhaseCode& code);

/// Piecewise-constant phase of the code at time t in [-T/2, T/2]. Chip i
/// owns [-T/2 + i*t_b, -T/2 + (i+1)*t_b); the last chip also owns T/2.
double pc_phase(const PhaseCode& code, double T, double t);

}  // namespace mtsfm
