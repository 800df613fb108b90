package fixtures.speculative.clean;

public abstract class Greeter {
    private int greeted;

    public String greet(String name) {
        greeted++;
        return salutation() + ", " + name + " (" + greeted + ")";
    }

    protected abstract String salutation();
}

class FormalGreeter extends Greeter {
    private final String title;

    FormalGreeter(String title) {
        this.title = title;
    }

    @Override
    protected String salutation() {
        return "Good day";
    }

    String greetTitled(String name) {
        return greet(title + " " + name);
    }

    boolean hasTitle() {
        return title != null && !title.isEmpty();
    }
}

class CasualGreeter extends Greeter {
    private final boolean loud;

    CasualGreeter(boolean loud) {
        this.loud = loud;
    }

    @Override
    protected String salutation() {
        return loud ? "HEY" : "Hi";
    }

    String greetAll(String first, String second) {
        return greet(first) + "; " + greet(second);
    }

    String shout(String name) {
        return greet(name).toUpperCase();
    }
}

class Reception {
    private final Greeter greeter;

    Reception(Greeter greeter) {
        this.greeter = greeter;
    }

    String welcome(String visitor) {
        return greeter.greet(visitor) + "!";
    }
}
