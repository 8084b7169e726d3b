#include "mtsfm/phase_code.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace mtsfm {

PhaseCode::PhaseCode(std::vector<double> phases, std::string label)
    : phases_(std::move(phases)), label_(std::move(label)) {
  if (phases_.empty()) throw std::invalid_argument("phase code must have at least one chip");
  for (std::size_t i = 0; i < phases_.size(); ++i) {
    if (!std::isfinite(phases_[i]))
      throw std::invalid_argument("phase code chip " + std::to_string(i) + " is not finite");
  }
}

std::uint32_t primitive_taps(int degree) {
  // x^2+x+1, x^3+x+1, x^4+x+1, x^5+x^2+1, x^6+x^5+1, x^7+x+1,
  // x^8+x^4+x^3+x^2+1, x^9+x^4+1, x^10+x^3+1, x^11+x^2+1,
  // x^12+x^6+x^4+x+1, x^13+x^4+x^3+x+1, x^14+x^10+x^6+x+1, x^15+x+1,
  // x^16+x^12+x^3+x+1
  static constexpr std::array<std::uint32_t, 15> table = {
      0b110,
      0b1010,
      0b10010,
      0b100100,
      0b1100000,
      0b10000010,
      0b100011100,
      0b1000010000,
      0b10000001000,
      0b100000000100,
      0b1000001010010,
      0b10000000011010,
      0b100010001000010,
      0b1000000000000010,
      0b10001000000001010,
  };
  if (degree < 2 || degree > 16)
    throw std::out_of_range("m-sequence degree must be in [2, 16], got " + std::to_string(degree));
  return table[static_cast<std::size_t>(degree - 2)];
}

PhaseCode generate_msequence(int degree, std::uint32_t taps, std::uint32_t seed) {
  if (degree < 2 || degree > 16)
    throw std::out_of_range("m-sequence degree must be in [2, 16], got " + std::to_string(degree));
  const std::uint32_t width_mask = (1u << degree) - 1u;
  if (seed == 0) throw std::invalid_argument("m-sequence seed must be nonzero");
  if ((seed & ~width_mask) != 0)
    throw std::invalid_argument("m-sequence seed has bits above the register width");
  if ((taps >> degree) != 1u)
    throw std::invalid_argument("tap mask must have its highest set bit at x^degree");

  const std::size_t period = (std::size_t{1} << degree) - 1;
  std::vector<double> phases;
  phases.reserve(period);
  std::uint32_t reg = seed;
  // Feedback taps over a_1..a_{d-1}; a_0 always feeds back.
  const std::uint32_t feedback = (taps & width_mask) | 1u;
  for (std::size_t n = 0; n < period; ++n) {
    phases.push_back((reg & 1u) ? std::numbers::pi : 0.0);
    const std::uint32_t next = static_cast<std::uint32_t>(std::popcount(reg & feedback) & 1);
    reg = (reg >> 1) | (next << (degree - 1));
  }
  std::ostringstream label;
  label << "mseq" << period << "_taps0x" << std::hex << taps << "_seed0x" << seed;
  return PhaseCode(std::move(phases), label.str());
}

namespace {

struct BarkerEntry {
  int length;
  const char* signs;
};

constexpr std::array<BarkerEntry, 7> kBarker = {{
    {2, "+-"},
    {3, "++-"},
    {4, "++-+"},
    {5, "+++-+"},
    {7, "+++--+-"},
    {11, "+++---+--+-"},
    {13, "+++++--++-+-+"},
}};

constexpr std::array<int, 7> kBarkerLengths = {2, 3, 4, 5, 7, 11, 13};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n\v\f");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n\v\f");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::span<const int> barker_lengths() { return kBarkerLengths; }

PhaseCode barker_code(int length) {
  for (const auto& entry : kBarker) {
    if (entry.length != length) continue;
    std::vector<double> phases;
    for (const char* c = entry.signs; *c != '\0'; ++c)
      phases.push_back(*c == '-' ? std::numbers::pi : 0.0);
    return PhaseCode(std::move(phases), "barker" + std::to_string(length));
  }
  std::string msg = "unsupported Barker length " + std::to_string(length) + "; supported lengths:";
  for (int l : kBarkerLengths) msg += " " + std::to_string(l);
  throw std::invalid_argument(msg);
}

PhaseCode load_phase_code(std::istream& in, std::string label) {
  std::vector<double> phases;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    std::string_view number = text;
    if (number.front() == '+') number.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), value);
    if (ec != std::errc() || ptr != number.data() + number.size())
      throw ParseError(lineno, "line " + std::to_string(lineno) + ": cannot parse '" +
                                   std::string(text) + "' as a phase value");
    if (!std::isfinite(value))
      throw ParseError(lineno, "line " + std::to_string(lineno) + ": phase value is not finite");
    phases.push_back(value);
  }
  if (phases.empty()) throw ParseError(0, "phase code input contains no values");
  return PhaseCode(std::move(phases), std::move(label));
}

PhaseCode load_phase_code_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open phase code file '" + path + "'");
  std::string label = path;
  if (const auto slash = label.find_last_of('/'); slash != std::string::npos)
    label = label.substr(slash + 1);
  if (const auto dot = label.find_last_of('.'); dot != std::string::npos && dot > 0)
    label = label.substr(0, dot);
  return load_phase_code(in, label);
}

void write_phase_code(std::ostream& out, const PhaseCode& code) {
  out << std::setprecision(17);
  for (double phi : code.phases()) out << phi << '\n';
}

double pc_phase(const PhaseCode& code, double T, double t) {
  if (!(T > 0.0)) throw std::invalid_argument("pulse length must be positive");
  if (!(t >= -0.5 * T && t <= 0.5 * T))
    throw std::out_of_range("time lies outside the pulse [-T/2, T/2]");
  const auto n = code.size();
  const double tb = T / static_cast<double>(n);
  auto idx = static_cast<std::size_t>(std::floor((t + 0.5 * T) / tb));
  if (idx >= n) idx = n - 1;
  return code[idx];
}

}  // namespace mtsfm
