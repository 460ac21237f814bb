#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "privalog/relation.hpp"

namespace fixtures {

// Ships-and-ports example: two listing rows per table plus one extra ship
// whose cargo exceeds every port capacity (exercises the >= filter).
inline const char* kShipSource = R"(
:-type(ship(name : public string key, x : public int, y : public int,
            speed : public int, cargo_type : private string, cargo_amount : private int)).
:-type(port(name : public string, x : public int, y : public int, cap : private int)).

reachability_time(Ship, Port, Time) :-
    ship(Ship, X1, Y1, Speed, _, _),
    port(Port, X2, Y2, _),
    Time is sqrt((X1 - X2)^2 + (Y1 - Y2)^2) / Speed.

suitable_port(Ship, Port) :-
    port(Port, _, _, Capacity),
    ship(Ship, _, _, _, _, CargoAmount),
    Capacity >= CargoAmount.

arrival(Ship, Port, CargoType, Time) :-
    ship(Ship, _, _, _, CargoType, _),
    suitable_port(Ship, Port),
    reachability_time(Ship, Port, Time).

?-min(arrival(Ship, 'alma', 'carrot', Time), Time, MinTime).
)";

inline const char* kFibSource = R"(
fib(0, 1).
fib(1, 1).

fib(N, F) :-
    N > 1,
    N1 is N - 1,
    N2 is N - 2,
    fib(N1, F1),
    fib(N2, F2),
    F is F1 + F2.

?-fib(8, F).
)";

inline privalog::Database ship_db() {
    using privalog::DataType;
    using privalog::PrivacyType;
    using privalog::Value;

    privalog::Database db;

    privalog::Table ship;
    ship.schema.pred = "ship";
    ship.schema.columns = {{"name", PrivacyType::Public, DataType::String},
                           {"x", PrivacyType::Public, DataType::Int},
                           {"y", PrivacyType::Public, DataType::Int},
                           {"speed", PrivacyType::Public, DataType::Int},
                           {"cargo_type", PrivacyType::Private, DataType::String},
                           {"cargo_amount", PrivacyType::Private, DataType::Int}};
    ship.schema.primary_key = 0;
    ship.rows = {
        {Value::str("alfa"), Value::integer(270), Value::integer(290), Value::integer(40),
         Value::str("carrot"), Value::integer(10)},
        {Value::str("beta"), Value::integer(180), Value::integer(280), Value::integer(30),
         Value::str("garlic"), Value::integer(5)},
        {Value::str("gamma"), Value::integer(60), Value::integer(30), Value::integer(20),
         Value::str("carrot"), Value::integer(15)},
    };
    ship.finalize();
    db.tables.emplace("ship", std::move(ship));

    privalog::Table port;
    port.schema.pred = "port";
    port.schema.columns = {{"name", PrivacyType::Public, DataType::String},
                           {"x", PrivacyType::Public, DataType::Int},
                           {"y", PrivacyType::Public, DataType::Int},
                           {"cap", PrivacyType::Private, DataType::Int}};
    port.rows = {
        {Value::str("alma"), Value::integer(0), Value::integer(0), Value::integer(10)},
        {Value::str("cow"), Value::integer(10), Value::integer(10), Value::integer(10)},
    };
    port.finalize();
    db.tables.emplace("port", std::move(port));
    return db;
}

// independent oracle for the alfa->alma reachability time
inline double alfa_alma_time() { return std::sqrt(270.0 * 270.0 + 290.0 * 290.0) / 40.0; }

// iterative Fibonacci with fib(0)=1, fib(1)=1
inline int64_t fib_oracle(int n) {
    int64_t a = 1, b = 1;
    for (int i = 0; i < n; ++i) {
        int64_t c = a + b;
        a = b;
        b = c;
    }
    return a;
}

} // namespace fixtures
