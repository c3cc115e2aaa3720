#include "cyborg/evaluation.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "cyborg/raster_io.hpp"

namespace cyborg {

GroundTruthMask GroundTruthMask::from_labels(RasterImage labels) {
    if (labels.channels() != 1) labels = extract_channel(labels, 0);
    std::set<int> seen;
    for (auto v : labels.samples())
        if (v != 0) seen.insert(v);
    return {std::move(labels), {seen.begin(), seen.end()}};
}

GroundTruthMask load_ground_truth(const std::filesystem::path& png) {
    return GroundTruthMask::from_labels(read_image(png));
}

AgreementReport evaluate_agreement(const std::vector<InterestPoint>& points, const GroundTruthMask& truth,
                                   double tolerance_px) {
    if (truth.region_labels.empty()) throw std::invalid_argument("ground-truth mask has no labelled region");
    if (points.empty()) throw std::invalid_argument("no points to evaluate");

    AgreementReport report;
    report.regions_total = static_cast<int>(truth.region_labels.size());
    std::set<int> hit_regions;
    int hits = 0;

    const auto& lab = truth.labels;
    for (const auto& p : points) {
        PointVerdict v{p, false, 0, std::numeric_limits<double>::infinity()};
        double nearest_hit = std::numeric_limits<double>::infinity();
        for (int y = 0; y < lab.height(); ++y) {
            for (int x = 0; x < lab.width(); ++x) {
                const int l = lab.at(x, y);
                if (l == 0) continue;
                const double d = std::hypot(x - p.x, y - p.y);
                v.distance = std::min(v.distance, d);
                if (d <= tolerance_px) {
                    hit_regions.insert(l);
                    if (d < nearest_hit) {
                        nearest_hit = d;
                        v.region = l;
                    }
                }
            }
        }
        v.hit = v.region != 0;
        hits += v.hit ? 1 : 0;
        report.points.push_back(v);
    }

    const double n = static_cast<double>(points.size());
    report.agreement_rate = hits / n;
    report.false_positive_rate = (points.size() - hits) / n;
    report.regions_hit = static_cast<int>(hit_regions.size());
    report.false_negative_rate =
        static_cast<double>(report.regions_total - report.regions_hit) / report.regions_total;
    return report;
}

nlohmann::json to_json(const AgreementReport& r) {
    auto pts = nlohmann::json::array();
    for (const auto& v : r.points) {
        pts.push_back({{"x", v.point.x}, {"y", v.point.y}, {"rank", v.point.rank}, {"hit", v.hit},
                       {"region", v.region}, {"distance", v.distance}});
    }
    return {{"agreement_rate", r.agreement_rate},
            {"false_positive_rate", r.false_positive_rate},
            {"false_negative_rate", r.false_negative_rate},
            {"regions_total", r.regions_total},
            {"regions_hit", r.regions_hit},
            {"points", pts}};
}

}  // namespace cyborg
