#include "winmdp/result.hpp"

#include "winmdp/parser.hpp"

namespace winmdp {

using nlohmann::json;

std::string ec_class_name(EcClass cls) {
    switch (cls) {
        case EcClass::Good: return "good";
        case EcClass::NotGood: return "not_good";
        default: return "not_good_within_cap";
    }
}

json model_document(const Mdp& m) {
    json doc;
    doc["hash"] = model_hash(m);
    doc["kind"] = to_string(m.kind());
    doc["states"] = m.state_count();
    doc["transitions"] = m.transition_count();
    if (m.kind() == LabelKind::MeanPayoff)
        doc["max_abs_weight"] = m.max_abs_weight();
    else
        doc["max_priority"] = m.max_priority();
    return doc;
}

json verdict_document(const Mdp& m, const Verdict& v) {
    json doc;
    std::string objective = to_string(v.spec.variant) + "-" + to_string(v.kind);
    doc["objective"] = objective;
    if (v.spec.lambda) doc["lambda"] = *v.spec.lambda;
    doc["confidence"] = v.confidence == Confidence::Exact ? "exact" : "bounded_by_cap";

    json values = json::object();
    for (int s = 0; s < m.state_count(); ++s) values[m.state_name(s)] = rat_str(v.values[s]);
    doc["values"] = std::move(values);

    json mecs = json::array();
    for (const auto& mec : v.mecs) {
        json row;
        json states = json::array();
        for (int s : mec.states) states.push_back(m.state_name(s));
        row["states"] = std::move(states);
        row["class"] = ec_class_name(mec.cls);
        if (mec.lambda_star >= 0) row["lambda_star"] = mec.lambda_star;
        if (mec.cap >= 0) row["cap"] = mec.cap;
        if (!mec.region.empty()) {
            json region = json::array();
            for (int s : mec.region) region.push_back(m.state_name(s));
            row["safe_region"] = std::move(region);
        }
        mecs.push_back(std::move(row));
    }
    doc["mecs"] = std::move(mecs);
    doc["strategy_memory"] = v.strategy.memory_count();
    return doc;
}

json estimate_document(const Estimate& e) {
    json doc;
    doc["estimate"] = e.value;
    doc["half_width_99"] = e.half_width;
    doc["successes"] = e.successes;
    doc["samples"] = e.samples;
    doc["horizon"] = e.horizon;
    doc["convention"] = e.convention;
    return doc;
}

}  // namespace winmdp
