package lib;

public class CookBookReader extends Reader {
    public CookBook load() {
        return new CookBook();
    }
}
