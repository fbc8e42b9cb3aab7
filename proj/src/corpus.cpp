#include <geoflow/corpus.hpp>

#include <sstream>

namespace geoflow {

namespace {

const char* kEuclidean1 = R"JSON({
  "name": "euclidean1",
  "coordinates": ["x"],
  "metric_lower": [["1"]],
  "ansatz": { "coeff_degree": 4, "denominator": "1" }
})JSON";

const char* kEuclidean2 = R"JSON({
  "name": "euclidean2",
  "coordinates": ["x", "y"],
  "metric_lower": [["1"], ["0", "1"]],
  "tensors": {
    "rotation": { "rank": 1, "components": { "x": "y", "y": "-x" } }
  },
  "polynomials": {
    "angular_momentum": {
      "terms": [
        { "momenta": { "p_y": 1 }, "coeff": "x" },
        { "momenta": { "p_x": 1 }, "coeff": "-y" }
      ]
    }
  },
  "ansatz": { "coeff_degree": 4, "denominator": "1" }
})JSON";

const char* kExampleR3 = R"JSON({
  "name": "example_r3",
  "coordinates": ["r", "theta", "z"],
  "domain": "r > 0",
  "metric_lower": [
    ["1"],
    ["0", "r^2/(1+r^2)"],
    ["0", "0", "1/(1+r^2)"]
  ],
  "tensors": {
    "Omega": { "rank": 1, "components": { "r": "r", "z": "2*z/(1+r^2)" } },
    "omega1": { "rank": 1, "components": { "theta": "r^2/(1+r^2)" } },
    "omega2": { "rank": 1, "components": { "z": "1/(1+r^2)" } },
    "nablaOmega": {
      "rank": 2,
      "components": {
        "r,r": "1",
        "theta,theta": "r^2/(1+r^2)^2",
        "z,z": "(r^2+2)/(1+r^2)^2"
      }
    }
  },
  "ansatz": { "coeff_degree": 2, "denominator": "r^2*(1+r^2)^2", "coeff_vars": ["r", "z"] }
})JSON";

const char* kProductR1xR1 = R"JSON({
  "name": "product_r1xr1",
  "product": {
    "factor1": {
      "name": "line1",
      "coordinates": ["x1"],
      "metric_lower": [["1"]],
      "ansatz": { "coeff_degree": 4, "denominator": "1" }
    },
    "factor2": {
      "name": "line2",
      "coordinates": ["x2"],
      "metric_lower": [["1"]],
      "ansatz": { "coeff_degree": 4, "denominator": "1" }
    }
  }
})JSON";

const char* kAngularMomentum = R"JSON({
  "name": "angular_momentum",
  "polynomials": {
    "angular_momentum": {
      "terms": [
        { "momenta": { "p_x2": 1 }, "coeff": "x1" },
        { "momenta": { "p_x1": 1 }, "coeff": "-x2" }
      ]
    }
  }
})JSON";

const char* kProductR3xR3 = R"JSON({
  "name": "product_r3xr3",
  "product": {
    "factor1": {
      "name": "example_r3_1",
      "coordinates": ["r1", "theta1", "z1"],
      "domain": "r1 > 0",
      "metric_lower": [
        ["1"],
        ["0", "r1^2/(1+r1^2)"],
        ["0", "0", "1/(1+r1^2)"]
      ],
      "tensors": {
        "Omega1": { "rank": 1, "components": { "r1": "r1", "z1": "2*z1/(1+r1^2)" } },
        "nablaOmega1": {
          "rank": 2,
          "components": {
            "r1,r1": "1",
            "theta1,theta1": "r1^2/(1+r1^2)^2",
            "z1,z1": "(r1^2+2)/(1+r1^2)^2"
          }
        }
      },
      "ansatz": { "coeff_degree": 2, "denominator": "r1^2*(1+r1^2)^2", "coeff_vars": ["r1", "z1"] }
    },
    "factor2": {
      "name": "example_r3_2",
      "coordinates": ["r2", "theta2", "z2"],
      "domain": "r2 > 0",
      "metric_lower": [
        ["1"],
        ["0", "r2^2/(1+r2^2)"],
        ["0", "0", "1/(1+r2^2)"]
      ],
      "tensors": {
        "Omega2": { "rank": 1, "components": { "r2": "r2", "z2": "2*z2/(1+r2^2)" } },
        "nablaOmega2": {
          "rank": 2,
          "components": {
            "r2,r2": "1",
            "theta2,theta2": "r2^2/(1+r2^2)^2",
            "z2,z2": "(r2^2+2)/(1+r2^2)^2"
          }
        }
      },
      "ansatz": { "coeff_degree": 2, "denominator": "r2^2*(1+r2^2)^2", "coeff_vars": ["r2", "z2"] }
    }
  },
  "tensors": {
    "K": {
      "rank": 3,
      "components": {
        "r1,r2,r2": "r1/3",
        "r1,theta2,theta2": "r1*r2^2/(3*(1+r2^2)^2)",
        "r1,z2,z2": "r1*(r2^2+2)/(3*(1+r2^2)^2)",
        "z1,r2,r2": "2*z1/(3*(1+r1^2))",
        "z1,theta2,theta2": "2*z1*r2^2/(3*(1+r1^2)*(1+r2^2)^2)",
        "z1,z2,z2": "2*z1*(r2^2+2)/(3*(1+r1^2)*(1+r2^2)^2)",
        "r1,r1,r2": "-r2/3",
        "theta1,theta1,r2": "-r2*r1^2/(3*(1+r1^2)^2)",
        "z1,z1,r2": "-r2*(r1^2+2)/(3*(1+r1^2)^2)",
        "r1,r1,z2": "-2*z2/(3*(1+r2^2))",
        "theta1,theta1,z2": "-2*z2*r1^2/(3*(1+r2^2)*(1+r1^2)^2)",
        "z1,z1,z2": "-2*z2*(r1^2+2)/(3*(1+r2^2)*(1+r1^2)^2)"
      }
    }
  }
})JSON";

} // namespace

const std::vector<CorpusEntry>& corpusEntries() {
    static const std::vector<CorpusEntry> entries = {
        {"euclidean1", "metric", "flat line, Cartesian coordinate x", kEuclidean1, "", ""},
        {"euclidean2", "metric", "flat plane with the rotation Killing field", kEuclidean2, "",
         ""},
        {"example_r3", "metric",
         "curved R^3 in cylindrical coordinates with covectors Omega, omega1, omega2 and the "
         "Killing tensor nablaOmega",
         kExampleR3, "", ""},
        {"product_r1xr1", "metric", "flat line times flat line", kProductR1xR1, "", ""},
        {"product_r3xr3", "metric",
         "product of two curved R^3 factors carrying the degree-3 Killing tensor K",
         kProductR3xR3, "", ""},
        {"angular_momentum", "objects",
         "the integral x1*p_x2 - x2*p_x1 for product_r1xr1", kAngularMomentum, "", ""},
        {"section4_K", "alias", "the irreducible Killing tensor K of product_r3xr3", "",
         "product_r3xr3", "K"},
    };
    return entries;
}

std::optional<CorpusEntry> corpusFind(const std::string& name) {
    for (const auto& e : corpusEntries())
        if (e.name == name) return e;
    return std::nullopt;
}

std::string corpusListText() {
    std::ostringstream out;
    for (const auto& e : corpusEntries()) {
        out << e.name << " (" << e.kind << "): " << e.description << "\n";
    }
    return out.str();
}

} // namespace geoflow
