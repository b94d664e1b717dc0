#include "coxkl/cache_io.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>
#include <map>
#include <vector>

namespace coxkl {

namespace {

std::array<uint64_t, 256> make_crc_table() {
    std::array<uint64_t, 256> t{};
    constexpr uint64_t poly = 0xC96C5795D7870F42ull;  // reflected ECMA-182
    for (uint32_t i = 0; i < 256; ++i) {
        uint64_t c = i;
        for (int k = 0; k < 8; ++k) c = (c & 1) ? (c >> 1) ^ poly : c >> 1;
        t[i] = c;
    }
    return t;
}

const std::array<uint64_t, 256>& crc_table() {
    static const auto t = make_crc_table();
    return t;
}

struct Writer {
    std::vector<uint8_t> buf;

    void bytes(const void* p, size_t n) {
        const uint8_t* b = (const uint8_t*)p;
        buf.insert(buf.end(), b, b + n);
    }
    void u8(uint8_t v) { buf.push_back(v); }
    void u32(uint32_t v) {
        for (int i = 0; i < 4; ++i) buf.push_back((uint8_t)(v >> (8 * i)));
    }
    void u64(uint64_t v) {
        for (int i = 0; i < 8; ++i) buf.push_back((uint8_t)(v >> (8 * i)));
    }
    void i32(int32_t v) { u32((uint32_t)v); }
};

struct Reader {
    const uint8_t* p;
    size_t left;

    void need(size_t n) const {
        if (left < n) throw CacheFormatError("cache: truncated file");
    }
    void bytes(void* out, size_t n) {
        need(n);
        std::memcpy(out, p, n);
        p += n;
        left -= n;
    }
    uint8_t u8() {
        need(1);
        --left;
        return *p++;
    }
    uint32_t u32() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= (uint32_t)p[i] << (8 * i);
        p += 4;
        left -= 4;
        return v;
    }
    uint64_t u64() {
        need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= (uint64_t)p[i] << (8 * i);
        p += 8;
        left -= 8;
        return v;
    }
    int32_t i32() { return (int32_t)u32(); }
};

constexpr char kMagic[5] = {'C', 'O', 'X', 'K', 'L'};

}  // namespace

uint64_t crc64(const void* data, size_t len, uint64_t seed) {
    const auto& t = crc_table();
    uint64_t c = ~seed;
    const uint8_t* p = (const uint8_t*)data;
    for (size_t i = 0; i < len; ++i) c = t[(c ^ p[i]) & 0xff] ^ (c >> 8);
    return ~c;
}

void save_cache(const KLStore& store, const std::string& path) {
    // canonical glossary order: only referenced polynomials, sorted
    std::vector<uint32_t> used;
    used.reserve(store.table.size());
    for (const auto& [k, idx] : store.table) used.push_back(idx);
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    std::sort(used.begin(), used.end(),
              [&](uint32_t a, uint32_t b) { return store.glossary[a] < store.glossary[b]; });
    std::vector<uint32_t> remap(store.glossary.size(), UINT32_MAX);
    for (uint32_t i = 0; i < used.size(); ++i) remap[used[i]] = i;

    std::map<PairKey, uint32_t> table_sorted(store.table.begin(), store.table.end());
    std::map<PairKey, uint64_t> mu_sorted(store.mu_table.begin(), store.mu_table.end());

    Writer w;
    w.bytes(kMagic, 5);
    w.u32(kCacheVersion);
    w.u32((uint32_t)store.degree);
    w.i32(store.level);
    w.u64(table_sorted.size());
    w.u64(used.size());
    w.u64(mu_sorted.size());

    {
        Writer sec;
        for (uint32_t idx : used) {
            const auto& c = store.glossary[idx].coeffs();
            sec.u32((uint32_t)c.size());
            for (uint64_t v : c) sec.u64(v);
        }
        w.u64(sec.buf.size());
        w.bytes(sec.buf.data(), sec.buf.size());
    }
    {
        Writer sec;
        for (const auto& [k, idx] : table_sorted) {
            sec.u8((uint8_t)k.w.degree());
            sec.u64(k.w.packed());
            sec.u64(k.x.packed());
            sec.u32(remap[idx]);
        }
        w.u64(sec.buf.size());
        w.bytes(sec.buf.data(), sec.buf.size());
    }
    {
        Writer sec;
        for (const auto& [k, m] : mu_sorted) {
            sec.u8((uint8_t)k.w.degree());
            sec.u64(k.w.packed());
            sec.u64(k.x.packed());
            sec.u64(m);
        }
        w.u64(sec.buf.size());
        w.bytes(sec.buf.data(), sec.buf.size());
    }
    w.u64(crc64(w.buf.data(), w.buf.size()));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cache: cannot open for writing: " + path);
    out.write((const char*)w.buf.data(), (std::streamsize)w.buf.size());
    if (!out) throw std::runtime_error("cache: write failed: " + path);
}

KLStore load_cache(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cache: cannot open: " + path);
    std::vector<uint8_t> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    if (buf.size() < 5 + 4 + 8) throw CacheFormatError("cache: truncated file");
    if (std::memcmp(buf.data(), kMagic, 5) != 0) throw CacheFormatError("cache: bad magic");

    const uint64_t stored_crc = crc64(buf.data(), buf.size() - 8);
    uint64_t file_crc = 0;
    for (int i = 0; i < 8; ++i) file_crc |= (uint64_t)buf[buf.size() - 8 + i] << (8 * i);
    if (stored_crc != file_crc) throw CacheChecksumError("cache: checksum mismatch");

    Reader r{buf.data() + 5, buf.size() - 5 - 8};
    const uint32_t version = r.u32();
    if (version != kCacheVersion)
        throw CacheVersionError("cache: version mismatch (file " + std::to_string(version) +
                                ", expected " + std::to_string(kCacheVersion) + ")");

    KLStore store;
    store.degree = (int)r.u32();
    store.level = r.i32();
    const uint64_t pair_count = r.u64();
    const uint64_t gloss_count = r.u64();
    const uint64_t mu_count = r.u64();

    {
        const uint64_t len = r.u64();
        Reader sec{r.p, std::min((size_t)len, r.left)};
        if (len > r.left) throw CacheFormatError("cache: truncated file");
        for (uint64_t i = 0; i < gloss_count; ++i) {
            const uint32_t nc = sec.u32();
            std::vector<uint64_t> c(nc);
            for (uint32_t k = 0; k < nc; ++k) c[k] = sec.u64();
            IntPolynomial p(std::move(c));
            if ((uint64_t)store.intern(p) != i) throw CacheFormatError("cache: duplicate glossary entry");
        }
        if (sec.left != 0) throw CacheFormatError("cache: glossary section size mismatch");
        r.p += len;
        r.left -= len;
    }
    {
        const uint64_t len = r.u64();
        Reader sec{r.p, std::min((size_t)len, r.left)};
        if (len > r.left) throw CacheFormatError("cache: truncated file");
        for (uint64_t i = 0; i < pair_count; ++i) {
            const int n = sec.u8();
            const uint64_t wp = sec.u64();
            const uint64_t xp = sec.u64();
            const uint32_t idx = sec.u32();
            if (idx >= gloss_count) throw CacheFormatError("cache: glossary index out of range");
            store.table.emplace(PairKey{Permutation::unpack(n, wp), Permutation::unpack(n, xp)}, idx);
        }
        if (sec.left != 0) throw CacheFormatError("cache: table section size mismatch");
        r.p += len;
        r.left -= len;
    }
    {
        const uint64_t len = r.u64();
        Reader sec{r.p, std::min((size_t)len, r.left)};
        if (len > r.left) throw CacheFormatError("cache: truncated file");
        for (uint64_t i = 0; i < mu_count; ++i) {
            const int n = sec.u8();
            const uint64_t wp = sec.u64();
            const uint64_t xp = sec.u64();
            const uint64_t m = sec.u64();
            store.mu_table.emplace(PairKey{Permutation::unpack(n, wp), Permutation::unpack(n, xp)}, m);
        }
        if (sec.left != 0) throw CacheFormatError("cache: mu section size mismatch");
        r.p += len;
        r.left -= len;
    }
    if (r.left != 0) throw CacheFormatError("cache: trailing bytes");
    return store;
}

}  // namespace coxkl
