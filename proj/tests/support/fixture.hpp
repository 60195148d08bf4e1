#pragma once

#include <string>
#include <vector>

#include "comove/io.hpp"
#include "comove/model.hpp"

namespace comove::testing {

inline Dataset four_objects() { return load_dataset(std::string(COMOVE_DATA_DIR) + "/four_objects.paths"); }

inline ObjectId obj(const Dataset& d, const char* name) { return *d.find_object(name); }
inline CameraId cam(const Dataset& d, const char* name) { return *d.find_camera(name); }

inline Pattern make_pattern(const Dataset& d, std::vector<const char*> objects, const std::string& route) {
  Pattern p;
  for (const char* o : objects) p.objects.push_back(obj(d, o));
  std::sort(p.objects.begin(), p.objects.end());
  for (char c : route) p.route.push_back(*d.find_camera(std::string(1, c)));
  return p;
}

// Keys (objects by name, route as a camera string) for compact assertions.
inline std::vector<std::string> keys(const std::vector<Pattern>& ps, const Dataset& d) {
  std::vector<std::string> out;
  for (const Pattern& p : ps) {
    std::string s;
    for (ObjectId o : p.objects) s += d.object_name(o);
    s += ':';
    for (CameraId c : p.route) s += d.camera_name(c);
    out.push_back(s);
  }
  return out;
}

}  // namespace comove::testing
