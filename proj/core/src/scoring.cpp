#include "repscore/scoring.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "repscore/errors.hpp"

namespace repscore {

double f1(double fp_distance) {
    if (fp_distance < 0.3) return 1.0;
    if (fp_distance <= 0.45) return (20.0 / 3.0) * (0.3 - fp_distance) + 1.0;
    return 0.0;
}

double f2(double correlation) {
    if (correlation > 0.55) return 1.0;
    if (correlation >= 0.25) return (10.0 / 3.0) * (correlation - 0.25);
    return 0.0;
}

double pair_score(double fp_distance, double correlation) {
    return std::sqrt(f1(fp_distance) * f2(correlation));
}

RepetitionResult repetition_score(const std::vector<PairScore>& pairs) {
    RepetitionResult result;
    if (pairs.empty()) return result;

    std::vector<PairScore> sorted = pairs;
    std::sort(sorted.begin(), sorted.end(), [](const PairScore& a, const PairScore& b) {
        if (a.combined != b.combined) return a.combined > b.combined;
        if (a.fp_distance != b.fp_distance) return a.fp_distance < b.fp_distance;
        if (a.idx_a != b.idx_a) return a.idx_a < b.idx_a;
        return a.idx_b < b.idx_b;
    });

    const std::size_t k = std::min(
        sorted.size(),
        static_cast<std::size_t>(std::ceil(0.05 * static_cast<double>(sorted.size()))));
    result.top_pairs.assign(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k));

    double acc = 0.0;
    for (const PairScore& p : result.top_pairs) {
        if (p.combined > 0.0) {
            result.contributors.push_back(p);
            acc += p.combined;
        }
    }
    if (!result.contributors.empty())
        result.score = acc / static_cast<double>(result.contributors.size());
    return result;
}

double intensity_score(const std::vector<PairScore>& contributors) {
    if (contributors.empty()) return 0.0;
    double acc = 0.0;
    for (const PairScore& p : contributors) acc += p.mean_energy;
    return acc / static_cast<double>(contributors.size());
}

ConflictReport conflict_score(const std::vector<PairScore>& pairs, std::size_t region_count,
                              const std::string& file_id) {
    ConflictReport report;
    report.file_id = file_id;
    report.region_count = region_count;
    report.pair_count = pairs.size();

    const RepetitionResult rep = repetition_score(pairs);
    report.repetition_score = rep.score;
    report.intensity_score = intensity_score(rep.contributors);
    report.conflict_score = report.repetition_score * report.intensity_score;
    report.top_pairs = rep.top_pairs;
    return report;
}

std::string report_to_json(const ConflictReport& report) {
    nlohmann::json j;
    j["version"] = ConflictReport::kSchemaVersion;
    j["file_id"] = report.file_id;
    j["repetition_score"] = report.repetition_score;
    j["intensity_score"] = report.intensity_score;
    j["conflict_score"] = report.conflict_score;
    j["region_count"] = report.region_count;
    j["pair_count"] = report.pair_count;
    if (!report.error.empty()) j["error"] = report.error;
    auto& pairs = j["top_pairs"] = nlohmann::json::array();
    for (const PairScore& p : report.top_pairs) {
        pairs.push_back({{"idx_a", p.idx_a},
                         {"idx_b", p.idx_b},
                         {"fp_distance", p.fp_distance},
                         {"correlation", p.correlation},
                         {"combined", p.combined},
                         {"mean_energy", p.mean_energy},
                         {"a_start", p.a_start},
                         {"a_end", p.a_end},
                         {"b_start", p.b_start},
                         {"b_end", p.b_end}});
    }
    return j.dump(2);
}

ConflictReport report_from_json(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text, nullptr, false);
    if (j.is_discarded()) throw IoError("report is not valid JSON");
    if (!j.contains("version") || j["version"].get<int>() != ConflictReport::kSchemaVersion)
        throw IoError("unknown report schema version");

    ConflictReport report;
    report.file_id = j.at("file_id").get<std::string>();
    report.repetition_score = j.at("repetition_score").get<double>();
    report.intensity_score = j.at("intensity_score").get<double>();
    report.conflict_score = j.at("conflict_score").get<double>();
    report.region_count = j.at("region_count").get<std::size_t>();
    report.pair_count = j.at("pair_count").get<std::size_t>();
    if (j.contains("error")) report.error = j["error"].get<std::string>();
    for (const auto& pj : j.at("top_pairs")) {
        PairScore p;
        p.idx_a = pj.at("idx_a").get<std::size_t>();
        p.idx_b = pj.at("idx_b").get<std::size_t>();
        p.fp_distance = pj.at("fp_distance").get<double>();
        p.correlation = pj.at("correlation").get<double>();
        p.combined = pj.at("combined").get<double>();
        p.mean_energy = pj.at("mean_energy").get<double>();
        p.a_start = pj.at("a_start").get<double>();
        p.a_end = pj.at("a_end").get<double>();
        p.b_start = pj.at("b_start").get<double>();
        p.b_end = pj.at("b_end").get<double>();
        report.top_pairs.push_back(p);
    }
    return report;
}

}  // namespace repscore
