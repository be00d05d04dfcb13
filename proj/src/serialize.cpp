#include "biplot/serialize.hpp"

#include <unordered_set>

#include <nlohmann/json.hpp>

#include "biplot/errors.hpp"

namespace biplot {

using nlohmann::json;

namespace {

json points_with_groups(const Config& pts, const std::vector<std::string>& groups) {
    json arr = json::array();
    for (Index i = 0; i < pts.rows(); ++i) {
        arr.push_back(
            {{"x", pts(i, 0)}, {"y", pts(i, 1)}, {"group", groups[static_cast<size_t>(i)]}});
    }
    return arr;
}

void read_points_with_groups(const json& arr, Config& pts, std::vector<std::string>& groups) {
    pts.resize(static_cast<Index>(arr.size()), 2);
    groups.clear();
    groups.reserve(arr.size());
    Index i = 0;
    for (const auto& e : arr) {
        pts(i, 0) = e.at("x").get<double>();
        pts(i, 1) = e.at("y").get<double>();
        groups.push_back(e.at("group").get<std::string>());
        ++i;
    }
}

}  // namespace

std::string export_frames_json(const FrameSequence& seq) {
    json doc;
    doc["fps"] = seq.fps;
    doc["levels"] = seq.states_covered;
    json frames = json::array();
    for (const auto& f : seq.frames) {
        json jf;
        jf["index"] = f.index;
        jf["clock"] = f.clock;
        jf["phase"] = {{"kind", f.phase.kind == PhaseKind::Pause ? "pause" : "transition"},
                       {"from", f.phase.from},
                       {"to", f.phase.to},
                       {"u", f.phase.u}};
        jf["samples"] = points_with_groups(f.sample_points, f.groups);
        json vectors = json::array();
        for (Index i = 0; i < f.variable_vectors.rows(); ++i) {
            vectors.push_back({{"x", f.variable_vectors(i, 0)},
                               {"y", f.variable_vectors(i, 1)},
                               {"name", f.variable_names[static_cast<size_t>(i)]}});
        }
        jf["vectors"] = vectors;
        json hulls = json::array();
        for (const auto& h : f.hulls) {
            json verts = json::array();
            for (Index i = 0; i < h.vertices.rows(); ++i)
                verts.push_back({h.vertices(i, 0), h.vertices(i, 1)});
            hulls.push_back({{"group", h.group}, {"vertices", verts}});
        }
        jf["hulls"] = hulls;
        json shadows = json::array();
        for (const auto& s : f.shadows) {
            shadows.push_back({{"level", s.source_level},
                               {"opacity", s.opacity},
                               {"points", points_with_groups(s.points, s.groups)}});
        }
        jf["shadows"] = shadows;
        frames.push_back(std::move(jf));
    }
    doc["frames"] = std::move(frames);
    return doc.dump() + "\n";
}

FrameSequence import_frames_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw DataError(std::string("frames json: ") + e.what());
    }
    FrameSequence seq;
    try {
        seq.fps = doc.at("fps").get<double>();
        seq.states_covered = doc.at("levels").get<std::vector<std::string>>();
        for (const auto& jf : doc.at("frames")) {
            Frame f;
            f.index = jf.at("index").get<int>();
            f.clock = jf.at("clock").get<double>();
            const auto& ph = jf.at("phase");
            f.phase.kind = ph.at("kind").get<std::string>() == "pause" ? PhaseKind::Pause
                                                                       : PhaseKind::Transition;
            f.phase.from = ph.at("from").get<std::string>();
            f.phase.to = ph.at("to").get<std::string>();
            f.phase.u = ph.at("u").get<double>();
            read_points_with_groups(jf.at("samples"), f.sample_points, f.groups);
            const auto& vectors = jf.at("vectors");
            f.variable_vectors.resize(static_cast<Index>(vectors.size()), 2);
            Index i = 0;
            for (const auto& v : vectors) {
                f.variable_vectors(i, 0) = v.at("x").get<double>();
                f.variable_vectors(i, 1) = v.at("y").get<double>();
                f.variable_names.push_back(v.at("name").get<std::string>());
                ++i;
            }
            for (const auto& jh : jf.at("hulls")) {
                GroupHull h;
                h.group = jh.at("group").get<std::string>();
                const auto& verts = jh.at("vertices");
                h.passthrough = verts.empty();
                h.vertices.resize(static_cast<Index>(verts.size()), 2);
                Index k = 0;
                for (const auto& v : verts) {
                    h.vertices(k, 0) = v.at(0).get<double>();
                    h.vertices(k, 1) = v.at(1).get<double>();
                    ++k;
                }
                f.hulls.push_back(std::move(h));
            }
            f.hulls_enabled = !f.hulls.empty();
            for (const auto& js : jf.at("shadows")) {
                ShadowSet s;
                s.source_level = js.at("level").get<std::string>();
                s.opacity = js.at("opacity").get<double>();
                read_points_with_groups(js.at("points"), s.points, s.groups);
                f.shadows.push_back(std::move(s));
            }
            // legend: first-appearance order over the frame's groups
            std::unordered_set<std::string> seen;
            for (const auto& g : f.groups)
                if (seen.insert(g).second) f.legend_groups.push_back(g);
            seq.frames.push_back(std::move(f));
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("frames json: ") + e.what());
    }

    // rebuild per-state snapshots from the first pause frame of each level
    for (const auto& level : seq.states_covered) {
        for (const auto& f : seq.frames) {
            if (f.phase.kind == PhaseKind::Pause && f.phase.from == level) {
                seq.snapshots.push_back({level, f.sample_points, f.groups});
                break;
            }
        }
    }
    return seq;
}

}  // namespace biplot
