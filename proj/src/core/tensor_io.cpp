#include "tryon/core/tensor_io.hpp"

#include <fstream>

#include <json.hpp>

#include "tryon/core/errors.hpp"

namespace tryon::core {

void save_tensor(const std::string& path, const Tensor& t, bool as_f32) {
    {
        std::ofstream os(path, std::ios::binary);
        if (!os) throw tryon::IoError("cannot open tensor container: " + path);
        if (as_f32) {
            std::vector<float> buf(static_cast<size_t>(t.numel()));
            for (int i = 0; i < t.numel(); ++i) buf[static_cast<size_t>(i)] = static_cast<float>(t[i]);
            os.write(reinterpret_cast<const char*>(buf.data()),
                     static_cast<std::streamsize>(buf.size() * sizeof(float)));
        } else {
            os.write(reinterpret_cast<const char*>(t.data()),
                     static_cast<std::streamsize>(sizeof(double) * t.numel()));
        }
        if (!os) throw tryon::IoError("tensor write failed: " + path);
    }
    nlohmann::ordered_json sidecar;
    sidecar["shape"] = t.shape();
    sidecar["dtype"] = as_f32 ? "f32" : "f64";
    sidecar["order"] = "row_major";
    sidecar["byte_order"] = "little";
    std::ofstream js(path + ".json");
    if (!js) throw tryon::IoError("cannot open tensor sidecar: " + path + ".json");
    js << sidecar.dump(2) << "\n";
}

Tensor load_tensor(const std::string& path) {
    std::ifstream js(path + ".json");
    if (!js) throw tryon::IoError("missing tensor sidecar: " + path + ".json");
    nlohmann::json sidecar;
    js >> sidecar;
    Shape shape = sidecar.at("shape").get<Shape>();
    std::string dtype = sidecar.at("dtype").get<std::string>();
    Tensor t(shape);
    std::ifstream is(path, std::ios::binary);
    if (!is) throw tryon::IoError("cannot open tensor container: " + path);
    if (dtype == "f32") {
        std::vector<float> buf(static_cast<size_t>(t.numel()));
        is.read(reinterpret_cast<char*>(buf.data()),
                static_cast<std::streamsize>(buf.size() * sizeof(float)));
        for (int i = 0; i < t.numel(); ++i) t[i] = buf[static_cast<size_t>(i)];
    } else if (dtype == "f64") {
        is.read(reinterpret_cast<char*>(t.data()),
                static_cast<std::streamsize>(sizeof(double) * t.numel()));
    } else {
        throw tryon::IoError("tensor sidecar has unsupported dtype: " + dtype);
    }
    if (!is) throw tryon::IoError("tensor container truncated: " + path);
    return t;
}

}  // namespace tryon::core
