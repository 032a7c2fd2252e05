// SPDX-License-Identifier: Apache-2.0
//
// apqsm — link-level simulation and power-allocation optimization for
// superposed-PAM spatial modulation in indoor visible-light MIMO links
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstdio>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace apqsm {

/// RFC 4180 quoting: fields containing a comma, quote or newline are wrapped
/// in quotes with embedded quotes doubled.
inline std::string csv_escape(std::string_view field)
{
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

/// Scientific notation with 17 significant digits, enough to round-trip a
/// double exactly.
inline std::string format_sci17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

inline std::string format_g(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

/// UTF-8, LF-only CSV writer.
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary)
    {
        if (!out_) throw std::runtime_error("cannot open output file: " + path);
        path_ = path;
    }

    void row(std::span<const std::string> fields)
    {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << csv_escape(fields[i]);
        }
        out_ << '\n';
    }

    void row(std::initializer_list<std::string> fields)
    {
        row(std::span<const std::string>(fields.begin(), fields.size()));
    }

    ~CsvWriter()
    {
        out_.flush();
    }

    bool good() const { return out_.good(); }
    const std::string& path() const { return path_; }

  private:
    std::ofstream out_;
    std::string path_;
};

} // namespace apqsm
