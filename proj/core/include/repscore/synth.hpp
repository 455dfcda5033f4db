#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "repscore/audio.hpp"

namespace repscore {

/// Seed-deterministic synthetic evaluation corpus: harmonic speech-like
/// bursts over babble- and siren-like noise. High-conflict files embed
/// several loud repeats of one identical phrase, mild files fewer and
/// quieter, low files none.
struct SynthSpec {
    int high = 3;
    int mild = 15;
    int low = 87;
    uint64_t seed = 7;
    double file_duration = 25.0;  // seconds per file

    int n_files() const { return high + mild + low; }
};

struct SynthFile {
    std::string name;  // wav filename relative to the output directory
    int label = 0;     // 2 high / 1 mild / 0 low
};

/// Writes <out_dir>/file_###.wav plus labels.csv (file_id,label).
std::vector<SynthFile> generate_corpus(const SynthSpec& spec, const std::string& out_dir);

/// Labeled VAD training audio: speech-only and non-speech-only files plus
/// vad_labels.csv (path,label with label speech|nonspeech).
void generate_vad_corpus(uint64_t seed, double seconds_per_class, const std::string& out_dir);

/// One speech-like phrase (harmonic stack with pitch contour and syllable
/// envelope) at the given peak amplitude; used by both corpus generators.
std::vector<double> synth_phrase(uint64_t phrase_seed, int sample_rate, double amplitude);

}  // namespace repscore
