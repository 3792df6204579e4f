#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "phaseless/lattices.hpp"
#include "phaseless/retrieval.hpp"
#include "phaseless/stft.hpp"
#include "phaseless/types.hpp"
#include "phaseless/windows.hpp"

namespace phaseless::io {

// 17 significant digits: shortest representation that round-trips a double.
std::string format_double(double v);

// Insertion-ordered JSON value for byte-stable reports: objects keep keys in
// the order they were set, arrays print inline, objects print one key per
// line. Numbers go through format_double.
class Json {
public:
    static Json null();
    static Json boolean(bool v);
    static Json number(double v);
    static Json integer(std::int64_t v);
    static Json str(std::string v);
    static Json array();
    static Json object();

    Json& push(Json v);                            // array append
    Json& set(const std::string& key, Json v);     // object insert / overwrite
    std::string dump(int indent = 2) const;

private:
    enum class Kind { null, scalar, array, object };
    Kind kind_ = Kind::null;
    std::string scalar_;  // preformatted literal (number, quoted string, bool)
    std::vector<Json> items_;
    std::vector<std::pair<std::string, Json>> fields_;

    void write(std::string& out, int indent, int depth) const;
};

std::string escape_json(const std::string& s);

// CSV emitters; all floats at 17 significant digits.
// Point sets: header idx,x,omega,n1,s1,n2,s2 — synthetic points without
// generating indices print the sentinel n=-1, s=0.
std::string point_set_csv(const lattices::PointSet& ps);
std::string sample_set_csv(const stft::TFSampleSet& s);

struct CounterexampleRow {
    cplx z;
    cplx value;
    double envelope_ratio;  // |F(z)| e^{-b |z|^2}
};
std::string counterexample_csv(const std::vector<CounterexampleRow>& rows);

// Signal JSON: {"t0": ..., "dt": ..., "values": [[re, im], ...]}.
Json signal_json(const Signal& f);
Signal parse_signal(const std::string& text);

Json window_json(const windows::WindowSpec& w);
Json threshold_json(const lattices::ThresholdReport& rep);
Json fit_json(const retrieval::FitReport& rep);
Json distinguish_json(const retrieval::DistinguishReport& rep);

// Write via temp file + rename so readers never observe a partial file.
void atomic_write(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}
