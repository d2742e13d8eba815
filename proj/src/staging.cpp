#include "metaseg/staging.hpp"

#include "metaseg/errors.hpp"

namespace metaseg {

PNStage stage_from_string(const std::string& s) {
    if (s == "pN0") return PNStage::pN0;
    if (s == "pN0(i+)") return PNStage::pN0i_plus;
    if (s == "pN1mi") return PNStage::pN1mi;
    if (s == "pN1") return PNStage::pN1;
    if (s == "pN2") return PNStage::pN2;
    throw ParameterError("unknown pN stage: " + s);
}

PNStage stage_patient(std::span<const SlideLabel> labels) {
    if (labels.empty()) throw ParameterError("stage_patient needs >= 1 slide label");
    if (labels.size() > 5) throw ParameterError("stage_patient accepts at most 5 labels");
    int macro = 0, micro = 0, itc = 0;
    for (SlideLabel l : labels) {
        if (l == SlideLabel::macro) ++macro;
        else if (l == SlideLabel::micro) ++micro;
        else if (l == SlideLabel::itc) ++itc;
    }
    const int positive = macro + micro;
    if (macro >= 1) return positive >= 4 ? PNStage::pN2 : PNStage::pN1;
    if (micro >= 1) return PNStage::pN1mi;
    if (itc >= 1) return PNStage::pN0i_plus;
    return PNStage::pN0;
}

} // namespace metaseg
