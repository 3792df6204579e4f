#include "phaseless/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace phaseless::io {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string escape_json(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

Json Json::null() { return Json{}; }

Json Json::boolean(bool v) {
    Json j;
    j.kind_ = Kind::scalar;
    j.scalar_ = v ? "true" : "false";
    return j;
}

Json Json::number(double v) {
    Json j;
    j.kind_ = Kind::scalar;
    j.scalar_ = format_double(v);
    return j;
}

Json Json::integer(std::int64_t v) {
    Json j;
    j.kind_ = Kind::scalar;
    j.scalar_ = std::to_string(v);
    return j;
}

Json Json::str(std::string v) {
    Json j;
    j.kind_ = Kind::scalar;
    j.scalar_ = "\"" + escape_json(v) + "\"";
    return j;
}

Json Json::array() {
    Json j;
    j.kind_ = Kind::array;
    return j;
}

Json Json::object() {
    Json j;
    j.kind_ = Kind::object;
    return j;
}

Json& Json::push(Json v) {
    if (kind_ != Kind::array) throw std::logic_error("Json::push on non-array");
    items_.push_back(std::move(v));
    return *this;
}

Json& Json::set(const std::string& key, Json v) {
    if (kind_ != Kind::object) throw std::logic_error("Json::set on non-object");
    for (auto& [k, old] : fields_) {
        if (k == key) {
            old = std::move(v);
            return *this;
        }
    }
    fields_.emplace_back(key, std::move(v));
    return *this;
}

void Json::write(std::string& out, int indent, int depth) const {
    switch (kind_) {
        case Kind::null: out += "null"; break;
        case Kind::scalar: out += scalar_; break;
        case Kind::array: {
            out += '[';
            for (std::size_t i = 0; i < items_.size(); ++i) {
                if (i) out += ", ";
                items_[i].write(out, indent, depth);  // arrays stay on one line
            }
            out += ']';
            break;
        }
        case Kind::object: {
            if (fields_.empty()) {
                out += "{}";
                break;
            }
            out += '{';
            const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
            for (std::size_t i = 0; i < fields_.size(); ++i) {
                out += i ? ",\n" : "\n";
                out += pad;
                out += "\"" + escape_json(fields_[i].first) + "\": ";
                fields_[i].second.write(out, indent, depth + 1);
            }
            out += '\n';
            out += std::string(static_cast<std::size_t>(indent) * depth, ' ');
            out += '}';
            break;
        }
    }
}

std::string Json::dump(int indent) const {
    std::string out;
    write(out, indent, 0);
    out += '\n';
    return out;
}

std::string point_set_csv(const lattices::PointSet& ps) {
    if (ps.dim != 2)
        throw precondition_error("point_set_csv: only 2-D point sets serialize to CSV");
    std::string out = "idx,x,omega,n1,s1,n2,s2\n";
    for (std::size_t i = 0; i < ps.points.size(); ++i) {
        const auto& p = ps.points[i];
        out += std::to_string(i);
        out += ',';
        out += format_double(p.coords[0]);
        out += ',';
        out += format_double(p.coords[1]);
        for (std::size_t j = 0; j < 2; ++j) {
            if (j < p.indices.size()) {
                out += ',' + std::to_string(p.indices[j].n);
                out += ',' + std::to_string(p.indices[j].sign);
            } else {
                out += ",-1,0";
            }
        }
        out += '\n';
    }
    return out;
}

std::string sample_set_csv(const stft::TFSampleSet& s) {
    std::string out = "x,omega,magnitude\n";
    for (std::size_t i = 0; i < s.magnitudes.size(); ++i) {
        const auto& c = s.points.points[i].coords;
        out += format_double(c[0]);
        out += ',';
        out += format_double(c[1]);
        out += ',';
        out += format_double(s.magnitudes[i]);
        out += '\n';
    }
    return out;
}

std::string counterexample_csv(const std::vector<CounterexampleRow>& rows) {
    std::string out = "re,im,F_re,F_im,envelope_ratio\n";
    for (const auto& r : rows) {
        out += format_double(r.z.real());
        out += ',';
        out += format_double(r.z.imag());
        out += ',';
        out += format_double(r.value.real());
        out += ',';
        out += format_double(r.value.imag());
        out += ',';
        out += format_double(r.envelope_ratio);
        out += '\n';
    }
    return out;
}

Json signal_json(const Signal& f) {
    Json values = Json::array();
    for (const cplx& v : f.values) {
        Json pair = Json::array();
        pair.push(Json::number(v.real()));
        pair.push(Json::number(v.imag()));
        values.push(std::move(pair));
    }
    Json j = Json::object();
    j.set("t0", Json::number(f.t0));
    j.set("dt", Json::number(f.dt));
    j.set("values", std::move(values));
    return j;
}

Signal parse_signal(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw precondition_error(std::string("parse_signal: invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("t0") || !j.contains("dt") || !j.contains("values"))
        throw precondition_error("parse_signal: expected {t0, dt, values}");
    Signal f;
    f.t0 = j["t0"].get<double>();
    f.dt = j["dt"].get<double>();
    for (const auto& pair : j["values"]) {
        if (!pair.is_array() || pair.size() != 2)
            throw precondition_error("parse_signal: values must be [re, im] pairs");
        f.values.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
    validate(f);
    return f;
}

Json window_json(const windows::WindowSpec& w) {
    Json j = Json::object();
    if (const auto* g = std::get_if<windows::Gaussian>(&w.shape)) {
        j.set("type", Json::str("gaussian"));
        j.set("gamma", Json::number(g->gamma));
    } else if (const auto* h = std::get_if<windows::Hermite>(&w.shape)) {
        j.set("type", Json::str("hermite"));
        j.set("n", Json::integer(h->n));
    } else {
        const auto& p = std::get<windows::PolyGaussian>(w.shape);
        j.set("type", Json::str("poly_gaussian"));
        j.set("gamma", Json::number(p.gamma));
        Json coeffs = Json::array();
        for (const cplx& c : p.coeffs) {
            Json pair = Json::array();
            pair.push(Json::number(c.real()));
            pair.push(Json::number(c.imag()));
            coeffs.push(std::move(pair));
        }
        j.set("coeffs", std::move(coeffs));
    }
    return j;
}

Json threshold_json(const lattices::ThresholdReport& rep) {
    Json j = Json::object();
    j.set("rule", Json::str(lattices::to_string(rep.rule)));
    Json tau = Json::array(), nu = Json::array();
    for (double v : rep.tau_max) tau.push(Json::number(v));
    for (double v : rep.nu_max) nu.push(Json::number(v));
    j.set("tau_max", std::move(tau));
    j.set("nu_max", std::move(nu));
    j.set("admissible", Json::boolean(rep.admissible));
    if (!rep.reason.empty()) j.set("reason", Json::str(rep.reason));
    return j;
}

Json fit_json(const retrieval::FitReport& rep) {
    Json j = Json::object();
    j.set("status", Json::str(rep.status));
    j.set("loss", Json::number(rep.loss));
    j.set("n_iters", Json::integer(rep.n_iters));
    Json coeffs = Json::array();
    for (const cplx& c : rep.coeffs) {
        Json pair = Json::array();
        pair.push(Json::number(c.real()));
        pair.push(Json::number(c.imag()));
        coeffs.push(std::move(pair));
    }
    j.set("coeffs", std::move(coeffs));
    if (rep.aligned_error) j.set("aligned_error", Json::number(*rep.aligned_error));
    j.set("seed", Json::integer(static_cast<std::int64_t>(rep.seed)));
    return j;
}

Json distinguish_json(const retrieval::DistinguishReport& rep) {
    Json j = Json::object();
    j.set("max_dev", Json::number(rep.max_dev));
    Json arg = Json::object();
    arg.set("x", Json::number(rep.argmax_x));
    arg.set("omega", Json::number(rep.argmax_omega));
    j.set("argmax", std::move(arg));
    j.set("aligned_distance", Json::number(rep.aligned_distance));
    return j;
}

void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw numeric_error("atomic_write: cannot open " + tmp);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw numeric_error("atomic_write: short write to " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw numeric_error("atomic_write: rename to " + path + " failed");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw precondition_error("read_file: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}
