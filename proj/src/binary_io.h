// Copyright 2026 The lexclust Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>

#include "lexclust/error.h"

namespace lexclust::detail {

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian hosts are not supported");

template <typename T>
T byteswap_if_big(T value) {
    if constexpr (std::endian::native == std::endian::big) {
        auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(value);
        std::reverse(bytes.begin(), bytes.end());
        return std::bit_cast<T>(bytes);
    } else {
        return value;
    }
}

/// Appends little-endian values to a byte string.
class ByteWriter {
public:
    void put_bytes(std::string_view s) { out_.append(s); }

    void put_u32(std::uint32_t v) { put_raw(byteswap_if_big(v)); }

    void put_f32(float v) { put_raw(byteswap_if_big(v)); }

    void put_u8s(std::span<const std::uint8_t> v) {
        out_.append(reinterpret_cast<const char*>(v.data()), v.size());
    }

    std::string take() { return std::move(out_); }

private:
    template <typename T>
    void put_raw(T v) {
        char buf[sizeof(T)];
        std::memcpy(buf, &v, sizeof(T));
        out_.append(buf, sizeof(T));
    }

    std::string out_;
};

/// Bounds-checked little-endian reader over a byte span.
class ByteReader {
public:
    ByteReader(std::span<const std::byte> bytes, std::string_view what)
        : bytes_(bytes), what_(what) {}

    void expect_magic(std::string_view magic) {
        need(magic.size());
        if (std::memcmp(bytes_.data() + pos_, magic.data(), magic.size()) != 0) {
            throw Error(std::string(what_) + ": bad magic (expected \"" +
                        std::string(magic) + "\")");
        }
        pos_ += magic.size();
    }

    std::uint32_t get_u32() { return get_raw<std::uint32_t>(); }
    float get_f32() { return get_raw<float>(); }

    std::span<const std::byte> get_bytes(std::size_t n) {
        need(n);
        auto s = bytes_.subspan(pos_, n);
        pos_ += n;
        return s;
    }

    std::size_t remaining() const { return bytes_.size() - pos_; }

private:
    template <typename T>
    T get_raw() {
        need(sizeof(T));
        T v;
        std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return byteswap_if_big(v);
    }

    void need(std::size_t n) const {
        if (bytes_.size() - pos_ < n) {
            throw Error(std::string(what_) + ": truncated file");
        }
    }

    std::span<const std::byte> bytes_;
    std::string_view what_;
    std::size_t pos_{0};
};

inline std::span<const std::byte> as_bytes(std::string_view s) {
    return {reinterpret_cast<const std::byte*>(s.data()), s.size()};
}

} // namespace lexclust::detail
