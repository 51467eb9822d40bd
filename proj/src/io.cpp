#include "ks2/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ks2::io {
namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
    return std::filesystem::path(path.string() + ".json");
}

void put_u64_le(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(char((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_u64_le(const std::string& bytes, std::size_t off) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v |= std::uint64_t(std::uint8_t(bytes[off + i])) << (8 * i);
    return v;
}

}  // namespace

void atomic_write(const std::filesystem::path& path, const std::string& bytes) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string());
        out.write(bytes.data(), std::streamsize(bytes.size()));
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::vector<std::uint8_t> pack_bits(const BitSequence& seq) {
    const std::uint64_t n = seq.size();
    std::vector<std::uint8_t> bytes((n + 7) / 8, 0);
    const auto& words = seq.words();
    for (std::size_t j = 0; j < bytes.size(); ++j)
        bytes[j] = std::uint8_t((words[j >> 3] >> ((j & 7) * 8)) & 0xFF);
    if (n % 8 != 0) bytes.back() &= std::uint8_t((1u << (n % 8)) - 1);
    return bytes;
}

BitSequence unpack_bits(const std::vector<std::uint8_t>& bytes, std::uint64_t n) {
    if (bytes.size() < (n + 7) / 8) throw std::invalid_argument("bit payload shorter than n");
    BitSequence seq(n);
    auto& words = seq.words();
    for (std::size_t j = 0; j < (n + 7) / 8; ++j)
        words[j >> 3] |= std::uint64_t(bytes[j]) << ((j & 7) * 8);
    seq.mask_last_word();
    return seq;
}

void write_sequence(const std::filesystem::path& path, const BitSequence& seq,
                    const GeneratorSpec& spec) {
    auto bytes = pack_bits(seq);
    atomic_write(path, std::string(reinterpret_cast<const char*>(bytes.data()), bytes.size()));

    nlohmann::json meta;
    meta["kind"] = to_string(spec.kind);
    meta["n"] = seq.size();
    switch (spec.kind) {
        case GeneratorSpec::Kind::baseline: meta["seed"] = spec.seed; break;
        case GeneratorSpec::Kind::true_orbit: meta["orbit_index"] = spec.orbit_index; break;
        case GeneratorSpec::Kind::rational_debug:
            meta["num"] = spec.num;
            meta["den"] = spec.den;
            break;
    }
    atomic_write(sidecar_path(path), meta.dump(2) + "\n");
}

BitSequence read_sequence(const std::filesystem::path& path) {
    nlohmann::json meta = nlohmann::json::parse(slurp(sidecar_path(path)));
    const std::uint64_t n = meta.at("n").get<std::uint64_t>();
    std::string raw = slurp(path);
    std::vector<std::uint8_t> bytes(raw.begin(), raw.end());
    return unpack_bits(bytes, n);
}

void write_pvalues(const std::filesystem::path& path, const std::vector<double>& values,
                   const PValueMeta& meta) {
    std::string bytes;
    bytes.reserve(values.size() * 8);
    for (double v : values) put_u64_le(bytes, std::bit_cast<std::uint64_t>(v));
    atomic_write(path, bytes);

    nlohmann::json j;
    j["test"] = meta.test;
    j["variant"] = meta.variant;
    j["n"] = meta.n;
    j["m"] = meta.m;
    j["generator"] = meta.generator;
    j["version"] = meta.version;
    atomic_write(sidecar_path(path), j.dump(2) + "\n");
}

std::vector<double> read_pvalues(const std::filesystem::path& path) {
    std::string bytes = slurp(path);
    if (bytes.size() % 8 != 0)
        throw std::runtime_error("p-value file size not a multiple of 8: " + path.string());
    std::vector<double> values(bytes.size() / 8);
    for (std::size_t i = 0; i < values.size(); ++i)
        values[i] = std::bit_cast<double>(get_u64_le(bytes, i * 8));
    return values;
}

PValueMeta read_pvalue_meta(const std::filesystem::path& path) {
    nlohmann::json j = nlohmann::json::parse(slurp(sidecar_path(path)));
    PValueMeta meta;
    meta.test = j.at("test").get<std::string>();
    meta.variant = j.at("variant").get<int>();
    meta.n = j.at("n").get<std::uint64_t>();
    meta.m = j.at("m").get<std::uint64_t>();
    meta.generator = j.at("generator").get<std::string>();
    meta.version = j.at("version").get<std::string>();
    return meta;
}

void export_step_distribution(const std::filesystem::path& path, const StepDistribution& dist) {
    std::ostringstream out;
    out.precision(17);
    out << "# value mass cumulative\n";
    for (std::size_t i = 0; i < dist.size(); ++i)
        out << dist.atoms()[i].value << ' ' << dist.atoms()[i].mass << ' '
            << dist.cumulative()[i] << '\n';
    atomic_write(path, out.str());
}

}  // namespace ks2::io
