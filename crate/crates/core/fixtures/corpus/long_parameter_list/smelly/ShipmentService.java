package fixtures.lpl.smelly;

import java.util.ArrayList;
import java.util.Date;
import java.util.List;

public class ShipmentService {
    private final List<String> log = new ArrayList<>();

    public String schedule(Address origin, Address destination, Carrier carrier, Date pickupDate,
                           int weight, boolean fragile, String note) {
        String entry = origin.city() + "->" + destination.city() + " via " + carrier.name();
        entry = entry + " on " + pickupDate + " (" + weight + "kg)";
        if (fragile) {
            entry = entry + " [fragile]";
        }
        log.add(entry);
        return entry;
    }

    public int scheduledCount() {
        return log.size();
    }
}

class Address {
    private final String city;

    Address(String city) {
        this.city = city;
    }

    String city() {
        return city.trim();
    }
}

class Carrier {
    private final String code;

    Carrier(String code) {
        this.code = code;
    }

    String name() {
        return "carrier-" + code;
    }
}
