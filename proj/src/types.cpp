#include "cfthp/types.hpp"

#include <string>

namespace cfthp {

std::string_view to_string(ThpStructure s) {
  return s == ThpStructure::centralized ? "centralized" : "decentralized";
}

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::network_wide: return "NW";
    case Variant::sparse: return "SP";
    case Variant::reduced: return "RD";
  }
  return "?";
}

std::string_view to_string(Modulation m) {
  return m == Modulation::qpsk ? "QPSK" : "QAM16";
}

std::string_view to_string(TauMode m) {
  return m == TauMode::paper ? "paper" : "consistent";
}

std::string_view to_string(SelfDistortion m) {
  return m == SelfDistortion::cross_term ? "cross-term" : "error-power";
}

Modulation parse_modulation(std::string_view text) {
  if (text == "QPSK" || text == "qpsk") return Modulation::qpsk;
  if (text == "QAM16" || text == "qam16" || text == "16QAM") return Modulation::qam16;
  throw std::invalid_argument("unsupported modulation '" + std::string(text) + "'");
}

TauMode parse_tau_mode(std::string_view text) {
  if (text == "paper") return TauMode::paper;
  if (text == "consistent") return TauMode::consistent;
  throw std::invalid_argument("tau mode must be 'paper' or 'consistent', got '" +
                              std::string(text) + "'");
}

SelfDistortion parse_self_distortion(std::string_view text) {
  if (text == "cross-term") return SelfDistortion::cross_term;
  if (text == "error-power") return SelfDistortion::error_power;
  throw std::invalid_argument("self distortion must be 'cross-term' or 'error-power', got '" +
                              std::string(text) + "'");
}

}  // namespace cfthp
