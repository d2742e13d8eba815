#pragma once

#include <span>
#include <string>

#include "metaseg/types.hpp"

namespace metaseg {

// Patient-level lymph-node stage, ordinal in severity order (the kappa
// weighting order).
enum class PNStage : int {
    pN0 = 0,
    pN0i_plus = 1,
    pN1mi = 2,
    pN1 = 3,
    pN2 = 4,
};

inline const char* to_string(PNStage s) {
    switch (s) {
    case PNStage::pN0: return "pN0";
    case PNStage::pN0i_plus: return "pN0(i+)";
    case PNStage::pN1mi: return "pN1mi";
    case PNStage::pN1: return "pN1";
    case PNStage::pN2: return "pN2";
    }
    return "?";
}

PNStage stage_from_string(const std::string& s);

// Deterministic staging rule over 1..5 per-slide labels:
//   macro >= 1 and positive >= 4          -> pN2
//   macro >= 1 and positive <= 3          -> pN1
//   macro == 0 and micro >= 1             -> pN1mi
//   only ITCs found                       -> pN0(i+)
//   nothing found                         -> pN0
// where positive = macro + micro (ITCs do not count as positive nodes).
PNStage stage_patient(std::span<const SlideLabel> labels);

} // namespace metaseg
