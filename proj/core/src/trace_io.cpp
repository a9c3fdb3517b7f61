// SPDX-License-Identifier: Apache-2.0
//
// hsdest - hybrid sparse/diffuse channel estimation and CRB analysis toolbox
// Copyright (C) 2026 hsdest contributors
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

#include "hsdest/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hsdest {

TraceFile ingest_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("ingest_trace: cannot open " + path);

    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("ingest_trace: missing header");

    TraceFile tf;
    tf.L_hat = -1;
    {
        std::stringstream ss(header);
        std::string field;
        bool have_n = false;
        while (std::getline(ss, field, ',')) {
            size_t eq = field.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error("ingest_trace: malformed header field: " + field);
            std::string key = field.substr(0, eq);
            std::string val = field.substr(eq + 1);
            if (key == "N") {
                tf.N = std::stoi(val);
                have_n = true;
            } else if (key == "Lhat") {
                tf.L_hat = std::stoi(val);
            } else {
                throw std::runtime_error("ingest_trace: unknown header field: " + key);
            }
        }
        if (!have_n) throw std::runtime_error("ingest_trace: header lacks N");
    }
    if (tf.N < 1) throw std::runtime_error("ingest_trace: N must be >= 1");

    tf.y = CVec(tf.N);
    std::string line;
    int rows = 0;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (rows >= tf.N)
            throw std::runtime_error("ingest_trace: more data rows than N at line " +
                                     std::to_string(lineno));
        long idx;
        double re, im;
        if (std::sscanf(line.c_str(), "%ld,%lf,%lf", &idx, &re, &im) != 3)
            throw std::runtime_error("ingest_trace: malformed row at line " + std::to_string(lineno));
        if (idx != rows)
            throw std::runtime_error("ingest_trace: unexpected index at line " +
                                     std::to_string(lineno));
        tf.y(rows) = cxd(re, im);
        ++rows;
    }
    if (rows != tf.N)
        throw std::runtime_error("ingest_trace: row count " + std::to_string(rows) +
                                 " does not match N=" + std::to_string(tf.N));

    if (tf.N % 2 == 0) {
        tf.N -= 1;
        tf.y.conservativeResize(tf.N);
        tf.note = "even N reduced by dropping the trailing sample";
    }
    if (tf.L_hat <= 0) tf.L_hat = tf.N;
    return tf;
}

void write_trace(const std::string& path, const CVec& y, int L_hat) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_trace: cannot open " + path);
    char buf[128];
    if (L_hat > 0)
        out << "N=" << y.size() << ",Lhat=" << L_hat << "\n";
    else
        out << "N=" << y.size() << "\n";
    for (int i = 0; i < y.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%d,%.16e,%.16e\n", i, y(i).real(), y(i).imag());
        out << buf;
    }
    if (!out) throw std::runtime_error("write_trace: write failed for " + path);
}

}  // namespace hsdest
