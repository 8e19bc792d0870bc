#include "lrk/table_cache.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "lrk/hash.hpp"

namespace lrk {

std::string Fnv1a64::hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string s(16, '0');
    std::uint64_t v = state_;
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = kDigits[v & 0xf];
        v >>= 4;
    }
    return s;
}

namespace {

constexpr std::array<char, 8> kMagic = {'L', 'R', 'K', 'G', 'T', 'A', 'B', '\0'};

template <typename T>
void put_le(std::vector<std::byte>& out, T value) {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
    auto bits = std::bit_cast<U>(value);
    for (std::size_t i = 0; i < sizeof(U); ++i) {
        out.push_back(static_cast<std::byte>(bits & 0xffu));
        bits >>= 8;
    }
}

template <typename T>
T get_le(std::span<const std::byte> in, std::size_t& offset) {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
    if (offset + sizeof(U) > in.size()) throw InvalidInput("correlator table file is truncated");
    U bits = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
        bits |= static_cast<U>(std::to_integer<unsigned>(in[offset + i])) << (8 * i);
    }
    offset += sizeof(U);
    return std::bit_cast<T>(bits);
}

void hash_double(Fnv1a64& h, double v) {
    std::vector<std::byte> buf;
    put_le(buf, v);
    h.update(buf);
}

}  // namespace

std::string table_cache_key(const ModelParams& p, int x_max, double abs_tol) {
    Fnv1a64 h;
    for (double v : {p.mu, p.t, p.delta, p.alpha, p.beta}) hash_double(h, v);
    std::vector<std::byte> buf;
    put_le(buf, static_cast<std::int64_t>(x_max));
    h.update(buf);
    hash_double(h, abs_tol);
    return h.hex();
}

void save_table(const std::filesystem::path& path, const CorrelatorTable& tbl, double abs_tol) {
    std::vector<std::byte> out;
    for (char c : kMagic) out.push_back(static_cast<std::byte>(c));
    put_le(out, kTableFormatVersion);
    put_le(out, std::uint32_t{0});
    const auto& p = tbl.params();
    for (double v : {p.mu, p.t, p.delta, p.alpha, p.beta}) put_le(out, v);
    put_le(out, static_cast<std::int64_t>(tbl.x_max()));
    put_le(out, abs_tol);
    put_le(out, static_cast<std::uint64_t>(tbl.values().size()));
    for (double v : tbl.values()) put_le(out, v);

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw InvalidInput("cannot open " + path.string() + " for writing");
    f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
    if (!f) throw InvalidInput("failed writing " + path.string());
}

LoadedTable load_table(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InvalidInput("cannot open " + path.string());
    std::vector<char> raw((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    const auto bytes = std::as_bytes(std::span(raw.data(), raw.size()));

    if (bytes.size() < kMagic.size() || std::memcmp(raw.data(), kMagic.data(), kMagic.size()) != 0) {
        throw InvalidInput(path.string() + " is not a correlator table file");
    }
    std::size_t off = kMagic.size();
    const auto version = get_le<std::uint32_t>(bytes, off);
    if (version != kTableFormatVersion) {
        throw InvalidInput(path.string() + ": unsupported table format version " + std::to_string(version));
    }
    (void)get_le<std::uint32_t>(bytes, off);
    ModelParams p;
    p.mu = get_le<double>(bytes, off);
    p.t = get_le<double>(bytes, off);
    p.delta = get_le<double>(bytes, off);
    p.alpha = get_le<double>(bytes, off);
    p.beta = get_le<double>(bytes, off);
    const auto x_max = get_le<std::int64_t>(bytes, off);
    const double abs_tol = get_le<double>(bytes, off);
    const auto count = get_le<std::uint64_t>(bytes, off);
    if (x_max < 1 || count != static_cast<std::uint64_t>(2 * x_max + 3)) {
        throw InvalidInput(path.string() + ": inconsistent x_max/count header");
    }
    if (bytes.size() - off != count * 8) throw InvalidInput(path.string() + ": payload size mismatch");
    std::vector<double> values(count);
    for (auto& v : values) v = get_le<double>(bytes, off);
    return {CorrelatorTable(p, static_cast<int>(x_max), std::move(values)), abs_tol};
}

TableCache::TableCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

std::filesystem::path TableCache::path_for(const ModelParams& p, int x_max, double abs_tol) const {
    return dir_ / (table_cache_key(p, x_max, abs_tol) + ".gtab");
}

std::optional<CorrelatorTable> TableCache::find(const ModelParams& p, int x_max, double abs_tol) const {
    const auto path = path_for(p, x_max, abs_tol);
    if (!std::filesystem::exists(path)) return std::nullopt;
    auto loaded = load_table(path);
    // A key collision would surface here as a parameter mismatch.
    if (!(loaded.table.params() == p) || loaded.table.x_max() != x_max || loaded.abs_tol != abs_tol) {
        return std::nullopt;
    }
    return std::move(loaded.table);
}

CorrelatorTable TableCache::get(const ModelParams& p, int x_max, const QuadratureConfig& q) {
    if (auto hit = find(p, x_max, q.abs_tol)) return *std::move(hit);
    auto tbl = correlator_table(p, x_max, q);
    save_table(path_for(p, x_max, q.abs_tol), tbl, q.abs_tol);
    return tbl;
}

}  // namespace lrk
