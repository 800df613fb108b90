package fixtures.featureenvy.clean;

public class Thermostat {
    private double target;
    private double current;
    private Sensor sensor;

    public Thermostat(Sensor sensor, double target) {
        this.sensor = sensor;
        this.target = target;
    }

    public boolean needsHeating() {
        current = sensor.read();
        return current < target - tolerance();
    }

    private double tolerance() {
        return target * 0.02;
    }
}

class Sensor {
    private double lastValue;

    double read() {
        lastValue = sample();
        return lastValue;
    }

    private double sample() {
        return lastValue + 0.5;
    }
}
