#include "repscore/segment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "repscore/errors.hpp"

namespace repscore {
namespace {

struct Run {
    std::size_t first = 0;
    std::size_t last = 0;  // inclusive
    double value = 0.0;
};

std::vector<Run> value_runs(const std::vector<double>& e) {
    std::vector<Run> runs;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (!runs.empty() && e[i] == runs.back().value) {
            runs.back().last = i;
        } else {
            runs.push_back({i, i, e[i]});
        }
    }
    return runs;
}

bool is_min_run(const std::vector<Run>& runs, std::size_t r) {
    const bool left_ok = r == 0 || runs[r - 1].value > runs[r].value;
    const bool right_ok = r + 1 == runs.size() || runs[r + 1].value > runs[r].value;
    return left_ok && right_ok;
}

bool is_max_run(const std::vector<Run>& runs, std::size_t r) {
    const bool left_ok = r == 0 || runs[r - 1].value < runs[r].value;
    const bool right_ok = r + 1 == runs.size() || runs[r + 1].value < runs[r].value;
    return left_ok && right_ok;
}

double mean_envelope(const EnergyEnvelope& env, std::size_t first, std::size_t last) {
    double acc = 0.0;
    for (std::size_t i = first; i <= last; ++i) acc += env.values[i];
    return acc / static_cast<double>(last - first + 1);
}

}  // namespace

EnergyEnvelope energy_envelope(const AudioBuffer& buf) {
    if (!buf.bandpassed)
        throw std::invalid_argument("energy_envelope: buffer has not been band-passed");
    if (buf.sample_rate <= 0) throw std::invalid_argument("energy_envelope: invalid rate");
    const std::size_t win = static_cast<std::size_t>(std::lround(kEnvelopeWindowSec * buf.sample_rate));
    const std::size_t hop = static_cast<std::size_t>(std::lround(kEnvelopeHopSec * buf.sample_rate));
    if (buf.samples.size() < win)
        throw BufferTooShort("energy_envelope needs at least one 0.05 s window");

    EnergyEnvelope env;
    const std::size_t n_win = (buf.samples.size() - win) / hop + 1;
    env.raw.resize(n_win);
    env.values.resize(n_win);
    for (std::size_t i = 0; i < n_win; ++i) {
        double acc = 0.0;
        const double* p = buf.samples.data() + i * hop;
        for (std::size_t j = 0; j < win; ++j) acc += p[j] * p[j];
        env.raw[i] = acc / static_cast<double>(win);
        env.values[i] = env.raw[i] > env.threshold ? env.raw[i] : 0.0;
    }

    double mean = 0.0;
    for (double v : env.values) mean += v;
    mean /= static_cast<double>(n_win);
    double var = 0.0;
    for (double v : env.values) var += (v - mean) * (v - mean);
    env.sigma = std::sqrt(var / static_cast<double>(n_win));
    return env;
}

SegmentationTrace find_breakpoints(const EnergyEnvelope& env) {
    SegmentationTrace trace;
    const auto& e = env.values;
    if (e.size() < 3) {
        if (!e.empty()) {
            trace.minima_early.push_back(0);
            trace.minima_late.push_back(e.size() - 1);
        }
        return trace;
    }

    const auto runs = value_runs(e);

    // t_0 = 0 by definition; its late edge is the end of the initial plateau.
    trace.minima_early.push_back(runs[0].first);
    trace.minima_late.push_back(runs[0].last);

    std::size_t prev_min_run = 0;
    for (std::size_t r = 1; r < runs.size(); ++r) {
        if (!is_min_run(runs, r)) continue;
        // earliest local maximum between the previous minimum and this one
        std::size_t max_idx = runs[prev_min_run].last;
        for (std::size_t m = prev_min_run + 1; m < r; ++m) {
            if (is_max_run(runs, m)) {
                max_idx = runs[m].first;
                break;
            }
        }
        trace.minima_early.push_back(runs[r].first);
        trace.minima_late.push_back(runs[r].last);
        trace.maxima.push_back(max_idx);
        prev_min_run = r;
    }

    // sigma test: a minimum closes a region when the spike before it is
    // prominent enough
    for (std::size_t i = 1; i < trace.minima_early.size(); ++i) {
        const double prominence =
            e[trace.maxima[i - 1]] - e[trace.minima_early[i]];
        if (prominence > env.sigma) trace.kept.push_back(i);
    }
    return trace;
}

std::vector<Region> select_regions(const SegmentationTrace& trace, const EnergyEnvelope& env) {
    std::vector<Region> regions;
    std::size_t prev_late = trace.minima_late.empty() ? 0 : trace.minima_late.front();
    for (std::size_t i : trace.kept) {
        const std::size_t first = prev_late;
        const std::size_t last = trace.minima_early[i];
        Region r;
        r.start = env.time_of(first);
        r.end = env.time_of(last);
        r.mean_energy = mean_envelope(env, first, last);
        r.source = RegionSource::Initial;
        regions.push_back(r);
        prev_late = trace.minima_late[i];
    }
    return regions;
}

std::vector<Region> concatenate_regions(std::vector<Region> regions, double cutoff) {
    std::sort(regions.begin(), regions.end(), [](const Region& a, const Region& b) {
        return a.start != b.start ? a.start < b.start : a.end < b.end;
    });

    const std::size_t n = regions.size();
    std::vector<Region> pool = regions;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; j + k + 1 < n; ++k) {
            const double gap = std::fabs(regions[j + k + 1].start - regions[j + k].end);
            if (gap >= cutoff) break;
            Region merged;
            merged.start = regions[j].start;
            merged.end = regions[j + k + 1].end;
            merged.source = RegionSource::Concatenated;
            // duration-weighted mean over the constituents (gaps excluded)
            double wsum = 0.0, acc = 0.0;
            for (std::size_t i = j; i <= j + k + 1; ++i) {
                const double w = regions[i].duration();
                acc += regions[i].mean_energy * w;
                wsum += w;
            }
            merged.mean_energy = wsum > 0.0 ? acc / wsum : 0.0;
            pool.push_back(merged);
        }
    }

    std::sort(pool.begin(), pool.end(), [](const Region& a, const Region& b) {
        if (a.start != b.start) return a.start < b.start;
        if (a.end != b.end) return a.end < b.end;
        return a.source < b.source;  // Initial wins on exact duplicates
    });
    std::vector<Region> out;
    for (const Region& r : pool) {
        if (r.duration() < kMinRegionSec - 1e-9) continue;
        if (!out.empty() && out.back().start == r.start && out.back().end == r.end) continue;
        out.push_back(r);
    }
    return out;
}

RegionSet segment(const AudioBuffer& buf) {
    AudioBuffer filtered = buf.bandpassed ? buf : bandpass(buf, 300.0, 3000.0);
    RegionSet set;
    set.envelope = energy_envelope(filtered);
    const auto trace = find_breakpoints(set.envelope);
    auto regions = select_regions(trace, set.envelope);
    set.regions = concatenate_regions(std::move(regions));

    // concatenated regions get their exact envelope mean, not the weighted
    // approximation used when the envelope is unavailable
    const double hop = set.envelope.hop;
    for (Region& r : set.regions) {
        const auto first = static_cast<std::size_t>(std::lround(r.start / hop));
        const auto last = std::min(static_cast<std::size_t>(std::lround(r.end / hop)),
                                   set.envelope.values.size() - 1);
        r.mean_energy = mean_envelope(set.envelope, first, last);
    }
    return set;
}

std::string regions_to_json(const std::vector<Region>& regions) {
    std::ostringstream out;
    out.precision(17);
    out << '[';
    for (std::size_t i = 0; i < regions.size(); ++i) {
        const Region& r = regions[i];
        if (i > 0) out << ',';
        out << "{\"start\":" << r.start << ",\"end\":" << r.end
            << ",\"mean_energy\":" << r.mean_energy << ",\"source\":\""
            << (r.source == RegionSource::Initial ? "initial" : "concatenated") << "\"}";
    }
    out << ']';
    return out.str();
}

void write_label_track(const std::string& path, const std::vector<Region>& regions) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot write " + path);
    f.precision(6);
    f << std::fixed;
    for (std::size_t i = 0; i < regions.size(); ++i)
        f << regions[i].start << '\t' << regions[i].end << "\tR" << i + 1 << '\n';
    if (!f) throw IoError("short write to " + path);
}

}  // namespace repscore
