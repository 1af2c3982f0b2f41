#include "wavefront/kernel_json.hpp"

#include <algorithm>

namespace wavefront {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

using Fields = std::vector<std::pair<const char*, double*>>;

void read_params(const nlohmann::json& params, const std::string& form, const Fields& fields) {
  if (!params.is_object()) throw InvalidParameter("kernel " + form + ": params must be an object");
  for (const auto& [key, value] : params.items()) {
    const bool known = std::any_of(fields.begin(), fields.end(),
                                   [&](const auto& f) { return key == f.first; });
    if (!known) throw InvalidParameter("kernel " + form + ": unknown parameter '" + key + "'");
  }
  for (const auto& [name, dst] : fields) {
    if (!params.contains(name) || !params[name].is_number()) {
      throw InvalidParameter("kernel " + form + ": missing numeric parameter '" + name + "'");
    }
    *dst = params[name].get<double>();
  }
}

}  // namespace

nlohmann::json kernel_spec_to_json(const KernelSpec& spec) {
  nlohmann::json params = std::visit(
      overloaded{
          [](const form::Exponential& k) { return nlohmann::json{{"rho", k.rho}}; },
          [](const form::ExpCosPlus& k) {
            return nlohmann::json{{"a", k.a}, {"b", k.b}, {"c", k.c}};
          },
          [](const form::ExpSinCos& k) { return nlohmann::json{{"a", k.a}}; },
          [](const form::ExpConstMinusCos& k) {
            return nlohmann::json{{"a", k.a}, {"b", k.b}, {"c", k.c}};
          },
          [](const form::ExpTrig& k) {
            return nlohmann::json{{"a", k.a}, {"b", k.b}, {"c", k.c},
                                  {"d", k.d}, {"e", k.e}, {"f", k.f}};
          },
          [](const form::ExpLinear& k) {
            return nlohmann::json{{"a", k.a}, {"b", k.b}, {"c", k.c}};
          },
      },
      spec.form);
  return {{"form", spec.form_name()}, {"params", params}};
}

KernelSpec kernel_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("form") || !j["form"].is_string()) {
    throw InvalidParameter("kernel JSON needs a string field 'form'");
  }
  const std::string name = j["form"].get<std::string>();
  const nlohmann::json params = j.value("params", nlohmann::json::object());
  KernelSpec spec;
  if (name == "exponential") {
    form::Exponential k;
    read_params(params, name, {{"rho", &k.rho}});
    spec.form = k;
  } else if (name == "exp_cos_plus") {
    form::ExpCosPlus k;
    read_params(params, name, {{"a", &k.a}, {"b", &k.b}, {"c", &k.c}});
    spec.form = k;
  } else if (name == "exp_sin_cos") {
    form::ExpSinCos k;
    read_params(params, name, {{"a", &k.a}});
    spec.form = k;
  } else if (name == "exp_const_minus_cos") {
    form::ExpConstMinusCos k;
    read_params(params, name, {{"a", &k.a}, {"b", &k.b}, {"c", &k.c}});
    spec.form = k;
  } else if (name == "exp_trig") {
    form::ExpTrig k;
    read_params(params, name,
                {{"a", &k.a}, {"b", &k.b}, {"c", &k.c}, {"d", &k.d}, {"e", &k.e}, {"f", &k.f}});
    spec.form = k;
  } else if (name == "exp_linear") {
    form::ExpLinear k;
    read_params(params, name, {{"a", &k.a}, {"b", &k.b}, {"c", &k.c}});
    spec.form = k;
  } else {
    throw InvalidParameter("unknown kernel form '" + name + "'");
  }
  spec.validate();
  return spec;
}

}  // namespace wavefront
