#include "rumor/container.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "rumor/errors.hpp"

namespace rumor {

namespace {

constexpr char kMagic[4] = {'R', 'M', 'D', 'L'};
constexpr std::uint64_t kMaxHeader = 1ull << 31;
constexpr std::int64_t kMaxElements = 1ll << 31;

static_assert(std::endian::native == std::endian::little, "container I/O assumes a little-endian host");

template <typename T>
void put(std::ostream& out, T value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <typename T>
T get(std::istream& in) {
    T value{};
    if (!in.read(reinterpret_cast<char*>(&value), sizeof value)) throw DataError("model file is truncated");
    return value;
}

std::string get_string(std::istream& in, std::uint64_t size) {
    if (size > kMaxHeader) throw DataError("model file has an oversized string");
    std::string s(size, '\0');
    if (size && !in.read(s.data(), static_cast<std::streamsize>(size))) throw DataError("model file is truncated");
    return s;
}

void check_shape(const Tensor& t) {
    const auto n = t.element_count();
    const auto have = t.dtype == DType::i32 ? t.ints.size() : t.values.size();
    if (static_cast<std::uint64_t>(n) != have)
        throw DataError("tensor '" + t.name + "' shape does not match its payload");
}

}  // namespace

std::int64_t Tensor::element_count() const {
    std::int64_t n = 1;
    for (auto d : shape) {
        if (d < 0 || (d > 0 && n > kMaxElements / d)) throw DataError("tensor '" + name + "' has an invalid shape");
        n *= d;
    }
    return n;
}

const Tensor& Container::tensor(const std::string& name) const {
    for (const auto& t : tensors)
        if (t.name == name) return t;
    throw DataError("model file lacks tensor '" + name + "'");
}

Tensor make_f32(std::string name, std::vector<std::int64_t> shape, std::vector<double> values) {
    Tensor t{std::move(name), DType::f32, std::move(shape), std::move(values), {}};
    check_shape(t);
    return t;
}

Tensor make_f64(std::string name, std::vector<std::int64_t> shape, std::vector<double> values) {
    Tensor t{std::move(name), DType::f64, std::move(shape), std::move(values), {}};
    check_shape(t);
    return t;
}

Tensor make_i32(std::string name, std::vector<std::int64_t> shape, std::vector<std::int32_t> values) {
    Tensor t{std::move(name), DType::i32, std::move(shape), {}, std::move(values)};
    check_shape(t);
    return t;
}

void write_container(std::ostream& out, const Container& c) {
    out.write(kMagic, 4);
    put<std::uint32_t>(out, kContainerVersion);
    const std::string header = c.header.dump();
    put<std::uint64_t>(out, header.size());
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(c.tensors.size()));
    for (const auto& t : c.tensors) {
        check_shape(t);
        put<std::uint32_t>(out, static_cast<std::uint32_t>(t.name.size()));
        out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
        put<std::uint8_t>(out, static_cast<std::uint8_t>(t.dtype));
        put<std::uint32_t>(out, static_cast<std::uint32_t>(t.shape.size()));
        for (auto d : t.shape) put<std::int64_t>(out, d);
        switch (t.dtype) {
            case DType::f32:
                for (double v : t.values) put<float>(out, static_cast<float>(v));
                break;
            case DType::f64:
                for (double v : t.values) put<double>(out, v);
                break;
            case DType::i32:
                for (auto v : t.ints) put<std::int32_t>(out, v);
                break;
        }
    }
    if (!out) throw DataError("failed to write model file");
}

Container read_container(std::istream& in) {
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw DataError("not a model file (bad magic)");
    const auto version = get<std::uint32_t>(in);
    if (version != kContainerVersion)
        throw DataError("unsupported model file version " + std::to_string(version));
    Container c;
    const auto header_size = get<std::uint64_t>(in);
    try {
        c.header = nlohmann::ordered_json::parse(get_string(in, header_size));
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("model header is not valid JSON: ") + e.what());
    }
    const auto count = get<std::uint32_t>(in);
    for (std::uint32_t k = 0; k < count; ++k) {
        Tensor t;
        t.name = get_string(in, get<std::uint32_t>(in));
        const auto dtype = get<std::uint8_t>(in);
        if (dtype < 1 || dtype > 3) throw DataError("tensor '" + t.name + "' has an unknown dtype");
        t.dtype = static_cast<DType>(dtype);
        const auto rank = get<std::uint32_t>(in);
        if (rank > 8) throw DataError("tensor '" + t.name + "' has an unsupported rank");
        for (std::uint32_t r = 0; r < rank; ++r) t.shape.push_back(get<std::int64_t>(in));
        const auto n = t.element_count();
        switch (t.dtype) {
            case DType::f32:
                t.values.resize(static_cast<std::size_t>(n));
                for (auto& v : t.values) v = get<float>(in);
                break;
            case DType::f64:
                t.values.resize(static_cast<std::size_t>(n));
                for (auto& v : t.values) v = get<double>(in);
                break;
            case DType::i32:
                t.ints.resize(static_cast<std::size_t>(n));
                for (auto& v : t.ints) v = get<std::int32_t>(in);
                break;
        }
        c.tensors.push_back(std::move(t));
    }
    return c;
}

void write_container_file(const std::string& path, const Container& c) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    write_container(out, c);
}

Container read_container_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model file '" + path + "'");
    return read_container(in);
}

}  // namespace rumor
