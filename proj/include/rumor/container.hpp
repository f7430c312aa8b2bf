#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace rumor {

// Binary model file: "RMDL" magic, u32 format version, u64 header length, a
// JSON header, u32 tensor count, then per tensor: name, dtype, shape and the
// little-endian payload. Used by the credibility network and the classifiers.
inline constexpr std::uint32_t kContainerVersion = 1;

enum class DType : std::uint8_t { f32 = 1, f64 = 2, i32 = 3 };

struct Tensor {
    std::string name;
    DType dtype = DType::f32;
    std::vector<std::int64_t> shape;
    std::vector<double> values;        // f32 / f64 payloads (f32 is rounded on write)
    std::vector<std::int32_t> ints;    // i32 payload

    std::int64_t element_count() const;
};

struct Container {
    nlohmann::ordered_json header = nlohmann::ordered_json::object();
    std::vector<Tensor> tensors;

    const Tensor& tensor(const std::string& name) const;  // throws DataError
};

Tensor make_f32(std::string name, std::vector<std::int64_t> shape, std::vector<double> values);
Tensor make_f64(std::string name, std::vector<std::int64_t> shape, std::vector<double> values);
Tensor make_i32(std::string name, std::vector<std::int64_t> shape, std::vector<std::int32_t> values);

void write_container(std::ostream& out, const Container& c);
Container read_container(std::istream& in);  // throws DataError on malformed input

void write_container_file(const std::string& path, const Container& c);
Container read_container_file(const std::string& path);

}  // namespace rumor
