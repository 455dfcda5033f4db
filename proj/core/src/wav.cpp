#include "repscore/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "repscore/errors.hpp"

namespace repscore {
namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;

uint32_t read_u32(const uint8_t* p) {
    return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
           (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t read_u16(const uint8_t* p) {
    return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

}  // namespace

AudioBuffer load_wav(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path);
    std::vector<uint8_t> data((std::istreambuf_iterator<char>(f)),
                              std::istreambuf_iterator<char>());
    if (data.size() < 12) throw MalformedWav(path + ": truncated header");
    if (std::memcmp(data.data(), "RIFF", 4) != 0 || std::memcmp(data.data() + 8, "WAVE", 4) != 0)
        throw MalformedWav(path + ": not a RIFF/WAVE file");

    uint16_t format = 0, channels = 0, bits = 0;
    uint32_t rate = 0;
    bool have_fmt = false;
    const uint8_t* pcm = nullptr;
    uint32_t pcm_bytes = 0;

    std::size_t pos = 12;
    while (pos + 8 <= data.size()) {
        const uint8_t* hdr = data.data() + pos;
        uint32_t chunk_size = read_u32(hdr + 4);
        pos += 8;
        if (pos + chunk_size > data.size())
            throw MalformedWav(path + ": chunk runs past end of file");
        if (std::memcmp(hdr, "fmt ", 4) == 0) {
            if (chunk_size < 16) throw MalformedWav(path + ": fmt chunk too small");
            const uint8_t* p = data.data() + pos;
            format = read_u16(p);
            channels = read_u16(p + 2);
            rate = read_u32(p + 4);
            bits = read_u16(p + 14);
            have_fmt = true;
        } else if (std::memcmp(hdr, "data", 4) == 0) {
            pcm = data.data() + pos;
            pcm_bytes = chunk_size;
        }
        pos += chunk_size + (chunk_size & 1);  // chunks are word-aligned
    }

    if (!have_fmt || pcm == nullptr) throw MalformedWav(path + ": missing fmt or data chunk");
    if (format != kFormatPcm && format != kFormatFloat)
        throw UnsupportedEncoding(path + ": format tag " + std::to_string(format));
    if (format == kFormatPcm && bits != 16)
        throw UnsupportedEncoding(path + ": " + std::to_string(bits) + "-bit PCM");
    if (format == kFormatFloat && bits != 32)
        throw UnsupportedEncoding(path + ": " + std::to_string(bits) + "-bit float");
    if (channels < 1 || channels > 2)
        throw UnsupportedEncoding(path + ": " + std::to_string(channels) + " channels");
    if (rate == 0) throw MalformedWav(path + ": zero sample rate");

    const std::size_t bytes_per_sample = bits / 8;
    const std::size_t n_frames = pcm_bytes / (bytes_per_sample * channels);
    if (n_frames == 0) throw EmptyAudio(path);

    AudioBuffer buf;
    buf.sample_rate = static_cast<int>(rate);
    buf.samples.resize(n_frames);
    for (std::size_t i = 0; i < n_frames; ++i) {
        double acc = 0.0;
        for (unsigned c = 0; c < channels; ++c) {
            const uint8_t* p = pcm + (i * channels + c) * bytes_per_sample;
            if (format == kFormatPcm) {
                int16_t v;
                std::memcpy(&v, p, 2);
                acc += v / 32768.0;
            } else {
                float v;
                std::memcpy(&v, p, 4);
                acc += v;
            }
        }
        buf.samples[i] = acc / channels;
    }
    return buf;
}

void save_wav(const std::string& path, const AudioBuffer& buf) {
    if (buf.sample_rate <= 0) throw IoError("save_wav: invalid sample rate");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path);

    const uint32_t n = static_cast<uint32_t>(buf.samples.size());
    const uint32_t data_bytes = n * 2;
    const uint32_t rate = static_cast<uint32_t>(buf.sample_rate);

    auto put_u32 = [&](uint32_t v) {
        uint8_t b[4] = {static_cast<uint8_t>(v), static_cast<uint8_t>(v >> 8),
                        static_cast<uint8_t>(v >> 16), static_cast<uint8_t>(v >> 24)};
        f.write(reinterpret_cast<char*>(b), 4);
    };
    auto put_u16 = [&](uint16_t v) {
        uint8_t b[2] = {static_cast<uint8_t>(v), static_cast<uint8_t>(v >> 8)};
        f.write(reinterpret_cast<char*>(b), 2);
    };

    f.write("RIFF", 4);
    put_u32(36 + data_bytes);
    f.write("WAVE", 4);
    f.write("fmt ", 4);
    put_u32(16);
    put_u16(kFormatPcm);
    put_u16(1);
    put_u32(rate);
    put_u32(rate * 2);
    put_u16(2);
    put_u16(16);
    f.write("data", 4);
    put_u32(data_bytes);
    for (double s : buf.samples) {
        double clamped = std::clamp(s, -1.0, 1.0);
        int v = static_cast<int>(std::lround(clamped * 32768.0));
        v = std::clamp(v, -32768, 32767);
        put_u16(static_cast<uint16_t>(static_cast<int16_t>(v)));
    }
    if (!f) throw IoError("short write to " + path);
}

}  // namespace repscore
