#include "tryon/core/checkpoint.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "tryon/core/errors.hpp"

namespace tryon::core {

static const char kMagic[8] = {'T', 'R', 'Y', 'O', 'N', 'C', 'K', '1'};

template <typename T>
static void write_pod(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
static void read_pod(std::istream& is, T& v) {
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
}

static void write_string(std::ostream& os, const std::string& s) {
    uint64_t len = s.size();
    write_pod(os, len);
    os.write(s.data(), static_cast<std::streamsize>(len));
}

static std::string read_string(std::istream& is) {
    uint64_t len = 0;
    read_pod(is, len);
    std::string s(len, '\0');
    is.read(s.data(), static_cast<std::streamsize>(len));
    return s;
}

void Checkpoint::save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw tryon::IoError("cannot open checkpoint for writing: " + path);
    os.write(kMagic, sizeof(kMagic));
    write_pod(os, config_fingerprint);
    write_pod(os, step);
    write_pod(os, epoch);
    write_string(os, rng_state);
    write_string(os, config_text);
    uint64_t count = tensors.size();
    write_pod(os, count);
    for (const auto& [name, t] : tensors) {
        write_string(os, name);
        uint32_t nd = static_cast<uint32_t>(t.ndim());
        write_pod(os, nd);
        for (int i = 0; i < t.ndim(); ++i) {
            int32_t d = t.dim(i);
            write_pod(os, d);
        }
        os.write(reinterpret_cast<const char*>(t.data()),
                 static_cast<std::streamsize>(sizeof(double) * t.numel()));
    }
    if (!os) throw tryon::IoError("checkpoint write failed: " + path);
}

Checkpoint Checkpoint::load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw tryon::IoError("cannot open checkpoint: " + path);
    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw tryon::IoError("not a checkpoint file: " + path);
    Checkpoint ck;
    read_pod(is, ck.config_fingerprint);
    read_pod(is, ck.step);
    read_pod(is, ck.epoch);
    ck.rng_state = read_string(is);
    ck.config_text = read_string(is);
    uint64_t count = 0;
    read_pod(is, count);
    for (uint64_t i = 0; i < count; ++i) {
        std::string name = read_string(is);
        uint32_t nd = 0;
        read_pod(is, nd);
        Shape shape(nd);
        for (uint32_t d = 0; d < nd; ++d) {
            int32_t v = 0;
            read_pod(is, v);
            shape[d] = v;
        }
        Tensor t(shape);
        is.read(reinterpret_cast<char*>(t.data()),
                static_cast<std::streamsize>(sizeof(double) * t.numel()));
        ck.tensors.emplace(std::move(name), std::move(t));
    }
    if (!is) throw tryon::IoError("checkpoint truncated: " + path);
    return ck;
}

uint64_t fnv1a64(const std::string& bytes) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

uint64_t file_hash(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw tryon::IoError("cannot hash file: " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return fnv1a64(os.str());
}

std::string hash_hex(uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace tryon::core
